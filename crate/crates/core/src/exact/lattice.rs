use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{kernel, primitive_int, RatMat};

/// A sublattice of `Z^n`, stored by its row-style Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntLattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
}

impl IntLattice {
    pub fn standard(n: usize) -> Self {
        let basis = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self { dim: n, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut r: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for row in &self.basis {
            let p = row.iter().position(|&x| x != 0).expect("nonzero basis row");
            let piv = BigInt::from(row[p]);
            let (q, rem) = r[p].div_rem(&piv);
            if !rem.is_zero() {
                return false;
            }
            for (x, &b) in r.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        r.iter().all(Zero::is_zero)
    }

    /// Whether the lattice has full rank in its ambient space.
    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }
}

/// Unimodular row elimination on the first `lead` columns. Returns the rows
/// in echelon form on those columns; trailing rows have zero leading part.
fn echelon(mut rows: Vec<Vec<BigInt>>, lead: usize, reduce_above: bool) -> Vec<Vec<BigInt>> {
    let mut r0 = 0;
    for col in 0..lead {
        if r0 == rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r0..rows.len() {
                if !rows[i][col].is_zero() && best.is_none_or(|b| rows[i][col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r0, b);
            let mut done = true;
            for i in (r0 + 1)..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r0][col]);
                let pivot_row = rows[r0].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r0 < rows.len() && !rows[r0][col].is_zero() {
            if rows[r0][col].is_negative() {
                for x in rows[r0].iter_mut() {
                    *x = -x.clone();
                }
            }
            if reduce_above {
                let pivot_row = rows[r0].clone();
                for row in &mut rows[..r0] {
                    let q = row[col].div_floor(&pivot_row[col]);
                    if !q.is_zero() {
                        for (x, p) in row.iter_mut().zip(&pivot_row) {
                            *x -= &q * p;
                        }
                    }
                }
            }
            r0 += 1;
        }
    }
    rows
}

fn to_i64_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<i64>> {
    rows.into_iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_i64().expect("lattice entry fits in i64"))
                .collect()
        })
        .collect()
}

/// Hermite normal form basis of the lattice generated by `vectors`.
/// An empty list gives the zero lattice (of dimension 0 unless `dim` says
/// otherwise, see [`hermite_basis_in`]).
pub fn hermite_basis(vectors: &[Vec<i64>]) -> IntLattice {
    let dim = vectors.first().map_or(0, Vec::len);
    hermite_basis_in(dim, vectors)
}

pub fn hermite_basis_in(dim: usize, vectors: &[Vec<i64>]) -> IntLattice {
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| {
            assert_eq!(v.len(), dim, "all vectors must share a dimension");
            v.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let rows = echelon(rows, dim, true);
    let basis = to_i64_rows(rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect());
    IntLattice { dim, basis }
}

/// Basis (in Hermite normal form) of `{x in Z^d : M x = 0}` for an integer
/// matrix given by rows of length `d`.
pub fn integer_kernel(d: usize, m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = m.len();
    let rows: Vec<Vec<BigInt>> = (0..d)
        .map(|j| {
            let mut r: Vec<BigInt> = m.iter().map(|row| BigInt::from(row[j])).collect();
            r.extend((0..d).map(|i| BigInt::from(i64::from(i == j))));
            r
        })
        .collect();
    let rows = echelon(rows, k, false);
    let ker: Vec<Vec<i64>> = to_i64_rows(
        rows.into_iter()
            .filter(|r| r[..k].iter().all(Zero::is_zero))
            .map(|r| r[k..].to_vec())
            .collect(),
    );
    hermite_basis_in(d, &ker).basis
}

/// Basis of `span_R(vectors) ∩ Z^d`.
pub fn saturated_basis(d: usize, vectors: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let m = RatMat::from_i64_rows(d, vectors).expect("consistent dimensions");
    let eqs: Vec<Vec<i64>> = kernel(&m).iter().filter_map(|v| primitive_int(v)).collect();
    if eqs.is_empty() {
        return IntLattice::standard(d).basis;
    }
    integer_kernel(d, &eqs)
}
