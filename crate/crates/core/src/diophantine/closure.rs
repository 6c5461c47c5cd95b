use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::symbolic::SymbolicPoint;
use crate::error::{Error, Result};
use crate::exact::{
    common_denominator, hermite_basis_in, integer_kernel, kernel, primitive_int, to_rat_vec, AffineSubspace,
    IntLattice, Rat, RatMat, RatVec,
};

/// Cap on the number of cosets enumerated.
const MAX_COSETS: usize = 1 << 20;

/// `W`, the smallest rational affine subspace containing `x`.
pub fn smallest_rational_affine(x: &SymbolicPoint) -> AffineSubspace {
    x.hull().clone()
}

/// Smallest rational affine subspace containing `λ x`.
pub fn pushforward_subspace(lambda: &RatMat, x: &SymbolicPoint) -> Result<AffineSubspace> {
    Ok(x.apply(lambda)?.hull().clone())
}

/// Structure of the closure of `π(N v + Λ)` in `V/Λ`: its identity
/// component is `V0/Λ0` and its components are the translates listed in
/// `cosets`, where `cosets[c]` is the class of `c·v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureStructure {
    pub v0: AffineSubspace,
    pub lattice0: IntLattice,
    #[serde(with = "crate::serial::rat_vecs")]
    pub cosets: Vec<RatVec>,
    pub dense: bool,
}

/// Canonical representatives of `Q^n / (U + Λ)` for a rational subspace `U`
/// and a full-rank lattice `Λ`.
struct Quotient {
    dirs: Vec<RatVec>,
    pivots: Vec<usize>,
    lattice_gens: Vec<RatVec>,
}

impl Quotient {
    fn new(u: &AffineSubspace, lattice: &IntLattice) -> Self {
        let q = Self {
            dirs: u.directions().to_vec(),
            pivots: u.pivots(),
            lattice_gens: Vec::new(),
        };
        let gens = lattice.basis().iter().map(|b| q.project(&to_rat_vec(b))).collect();
        Self {
            lattice_gens: gens,
            ..q
        }
    }

    /// Zeroes the pivot coordinates by subtracting directions.
    fn project(&self, w: &[Rat]) -> RatVec {
        let mut out = w.to_vec();
        for (d, &p) in self.dirs.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if !c.is_zero() {
                for (o, x) in out.iter_mut().zip(d) {
                    *o -= &c * x;
                }
            }
        }
        out
    }

    fn reduce(&self, w: &[Rat]) -> RatVec {
        let p = self.project(w);
        let mut all = self.lattice_gens.clone();
        all.push(p.clone());
        let den = all
            .iter()
            .fold(BigInt::from(1), |acc, v| acc.lcm(&common_denominator(v)));
        let scale = Rat::from_integer(den.clone());
        let to_int = |v: &RatVec| -> Vec<BigInt> { v.iter().map(|x| (x * &scale).to_integer()).collect() };
        let gens: Vec<Vec<i64>> = self
            .lattice_gens
            .iter()
            .map(|g| {
                to_int(g)
                    .iter()
                    .map(|x| x.to_i64().expect("lattice entry fits"))
                    .collect()
            })
            .collect();
        let hnf = hermite_basis_in(p.len(), &gens);
        let mut z = to_int(&p);
        for row in hnf.basis() {
            let piv = row.iter().position(|&x| x != 0).expect("nonzero row");
            let q = z[piv].div_floor(&BigInt::from(row[piv]));
            if !q.is_zero() {
                for (a, &b) in z.iter_mut().zip(row) {
                    *a -= &q * b;
                }
            }
        }
        z.into_iter().map(|a| Rat::new(a, den.clone())).collect()
    }
}

/// `Λ ∩ U` for a rational linear subspace `U`.
fn lattice_in_subspace(u: &AffineSubspace, lattice: &IntLattice) -> IntLattice {
    let n = lattice.ambient_dim();
    if u.dim() == 0 {
        return hermite_basis_in(n, &[]);
    }
    let dm = RatMat::from_rows(n, u.directions()).expect("dims");
    let normals: Vec<Vec<i64>> = kernel(&dm).iter().filter_map(|v| primitive_int(v)).collect();
    let b = lattice.basis();
    // coefficients z with (z B)·e = 0 for every normal e
    let rows: Vec<Vec<i64>> = normals
        .iter()
        .map(|e| b.iter().map(|bi| bi.iter().zip(e).map(|(x, y)| x * y).sum()).collect())
        .collect();
    let coeffs = if rows.is_empty() {
        IntLattice::standard(b.len()).basis().to_vec()
    } else {
        integer_kernel(b.len(), &rows)
    };
    let vecs: Vec<Vec<i64>> = coeffs
        .iter()
        .map(|z| (0..n).map(|j| z.iter().zip(b).map(|(c, bi)| c * bi[j]).sum()).collect())
        .collect();
    hermite_basis_in(n, &vecs)
}

pub fn closure_structure(v: &SymbolicPoint, lattice: &IntLattice) -> Result<ClosureStructure> {
    let n = v.dim();
    if lattice.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lattice.ambient_dim(),
        });
    }
    if !lattice.is_full_rank() {
        return Err(Error::Precondition("lattice must span the ambient space".into()));
    }
    let w = v.hull();
    let u = AffineSubspace::new(vec![Rat::zero(); n], w.directions())?;
    let quotient = Quotient::new(&u, lattice);
    let base = w.base_point().to_vec();
    let mut cosets = vec![vec![Rat::zero(); n]];
    loop {
        let c = Rat::from_integer(BigInt::from(cosets.len()));
        let rep = quotient.reduce(&base.iter().map(|x| x * &c).collect::<RatVec>());
        if rep.iter().all(Zero::is_zero) {
            break;
        }
        if cosets.len() >= MAX_COSETS {
            return Err(Error::SearchExhausted(MAX_COSETS as u64));
        }
        cosets.push(rep);
    }
    let dense = u.dim() == n && cosets.len() == 1;
    Ok(ClosureStructure {
        lattice0: lattice_in_subspace(&u, lattice),
        v0: u,
        cosets,
        dense,
    })
}

impl ClosureStructure {
    /// Number of connected components.
    pub fn order(&self) -> usize {
        self.cosets.len()
    }

    /// Whether `-c` is again a listed coset for every listed `c`.
    pub fn is_symmetric(&self, lattice: &IntLattice) -> bool {
        let q = Quotient::new(&self.v0, lattice);
        self.cosets.iter().all(|c| {
            let neg: RatVec = c.iter().map(|x| -x).collect();
            self.cosets.contains(&q.reduce(&neg))
        })
    }

    /// Canonical representative of `w` modulo `V0 + Λ`.
    pub fn representative(&self, w: &[Rat], lattice: &IntLattice) -> RatVec {
        Quotient::new(&self.v0, lattice).reduce(w)
    }
}
