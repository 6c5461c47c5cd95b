use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot_i64, dot_mixed, kernel, primitive_i64, primitive_int, rank, Rat, RatMat, RatVec};

/// A rational polyhedral cone `sum R_+ e_i` in `R^d`.
///
/// For pointed cones the stored generators are the primitive extreme rays in
/// lexicographic order, so structural equality is cone equality. Cones that
/// contain a line keep their (deduplicated, primitive) input generators.
#[derive(Clone, Debug)]
pub struct RationalCone {
    dim: usize,
    rays: Vec<Vec<i64>>,
    pointed: bool,
    /// Primitive normals `u` with `u·x >= 0` on the cone, one per facet.
    facets: Vec<Vec<i64>>,
    /// Primitive normals spanning the orthogonal complement of the span.
    equations: Vec<Vec<i64>>,
}

impl PartialEq for RationalCone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays
    }
}

impl Eq for RationalCone {}

impl std::hash::Hash for RationalCone {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.rays.hash(state);
    }
}

fn mat(d: usize, rows: &[Vec<i64>]) -> RatMat {
    RatMat::from_i64_rows(d, rows).expect("consistent dimensions")
}

fn int_rows(rows: Vec<RatVec>) -> Vec<Vec<i64>> {
    rows.iter().filter_map(|r| primitive_int(r)).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

impl RationalCone {
    /// The cone generated by `generators` in `R^dim`.
    pub fn new(dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        let mut gens = BTreeSet::new();
        for g in generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
            if g.iter().any(|&x| x != 0) {
                gens.insert(primitive_i64(g));
            }
        }
        let gens: Vec<Vec<i64>> = gens.into_iter().collect();
        let (facets, equations) = facets_of(dim, &gens);
        let mut all = equations.clone();
        all.extend(facets.iter().cloned());
        let pointed = all.is_empty() && dim == 0 || rank(&mat(dim, &all)) == dim;
        let rays = if pointed {
            gens.iter()
                .filter(|g| {
                    let mut tight = equations.clone();
                    tight.extend(facets.iter().filter(|u| dot_i64(u, g) == 0).cloned());
                    rank(&mat(dim, &tight)) + 1 == dim
                })
                .cloned()
                .collect()
        } else {
            gens
        };
        Ok(Self {
            dim,
            rays,
            pointed,
            facets,
            equations,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, &[]).expect("zero cone")
    }

    /// The whole space `R^dim` (not pointed).
    pub fn whole_space(dim: usize) -> Self {
        let mut gens = Vec::new();
        for i in 0..dim {
            for s in [1, -1] {
                let mut e = vec![0; dim];
                e[i] = s;
                gens.push(e);
            }
        }
        Self::new(dim, &gens).expect("whole space")
    }

    /// `{x : G x >= 0, E x = 0}`; the result must be pointed.
    pub fn from_inequalities(dim: usize, ineqs: &[RatVec], eqs: &[RatVec]) -> Result<Self> {
        let ineqs = int_rows(ineqs.to_vec());
        let eqs = int_rows(eqs.to_vec());
        Self::from_int_inequalities(dim, &ineqs, &eqs)
    }

    pub fn from_int_inequalities(dim: usize, ineqs: &[Vec<i64>], eqs: &[Vec<i64>]) -> Result<Self> {
        for r in ineqs.iter().chain(eqs) {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.len(),
                });
            }
        }
        let mut all = eqs.to_vec();
        all.extend(ineqs.iter().cloned());
        if dim > 0 && (all.is_empty() || rank(&mat(dim, &all)) < dim) {
            return Err(Error::NotPointed);
        }
        let re = if eqs.is_empty() { 0 } else { rank(&mat(dim, eqs)) };
        if re == dim {
            return Ok(Self::zero(dim));
        }
        let k = dim - 1 - re;
        let mut rays = BTreeSet::new();
        for s in subsets(ineqs.len(), k) {
            let mut rows = eqs.to_vec();
            rows.extend(s.iter().map(|&i| ineqs[i].clone()));
            let ker = if rows.is_empty() {
                RatMat::identity(dim).rows()
            } else {
                kernel(&mat(dim, &rows))
            };
            if ker.len() != 1 {
                continue;
            }
            let Some(u) = primitive_int(&ker[0]) else { continue };
            let neg: Vec<i64> = u.iter().map(|x| -x).collect();
            for cand in [u, neg] {
                if ineqs.iter().all(|g| dot_i64(g, &cand) >= 0) {
                    rays.insert(cand);
                }
            }
        }
        Self::new(dim, &rays.into_iter().collect::<Vec<_>>())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Generators: extreme rays for pointed cones.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    pub fn facets(&self) -> &[Vec<i64>] {
        &self.facets
    }

    pub fn equations(&self) -> &[Vec<i64>] {
        &self.equations
    }

    /// Dimension of the linear span.
    pub fn cone_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_simplicial(&self) -> bool {
        self.pointed && self.rays.len() == self.cone_dim()
    }

    pub fn contains_i64(&self, x: &[i64]) -> bool {
        self.equations.iter().all(|e| dot_i64(e, x) == 0) && self.facets.iter().all(|u| dot_i64(u, x) >= 0)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.equations.iter().all(|e| dot_mixed(e, x).is_zero())
            && self.facets.iter().all(|u| !dot_mixed(u, x).is_negative())
    }

    /// True iff `x = 0` or `x` is interior to the cone within its span.
    pub fn relint_contains(&self, x: &[Rat]) -> bool {
        if x.iter().all(Zero::is_zero) {
            return true;
        }
        self.equations.iter().all(|e| dot_mixed(e, x).is_zero())
            && self.facets.iter().all(|u| dot_mixed(u, x).is_positive())
    }

    pub fn intersection(&self, other: &RationalCone) -> Result<RationalCone> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Self::from_int_inequalities(self.dim, &ineqs, &eqs)
    }

    /// The smallest face of a pointed cone containing `x` (assumed in the cone).
    pub fn face_containing(&self, x: &[Rat]) -> RationalCone {
        let tight: Vec<&Vec<i64>> = self.facets.iter().filter(|u| dot_mixed(u, x).is_zero()).collect();
        let rays: Vec<Vec<i64>> = self
            .rays
            .iter()
            .filter(|r| tight.iter().all(|u| dot_i64(u, r) == 0))
            .cloned()
            .collect();
        RationalCone::new(self.dim, &rays).expect("subset of rays")
    }

    /// Sum of facet normals; strictly positive on nonzero points of a pointed
    /// cone.
    pub fn grading(&self) -> Vec<i64> {
        let mut h = vec![0i64; self.dim];
        for u in &self.facets {
            for (x, y) in h.iter_mut().zip(u) {
                *x += y;
            }
        }
        h
    }

    /// Sum of the generators, a point of the relative interior.
    pub fn interior_point(&self) -> Vec<i64> {
        let mut p = vec![0i64; self.dim];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += y;
            }
        }
        p
    }
}

/// Facet normals and equations of the cone generated by `gens`.
fn facets_of(dim: usize, gens: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    if gens.is_empty() {
        let eqs = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        return (Vec::new(), eqs);
    }
    let g = mat(dim, gens);
    let equations = int_rows(kernel(&g));
    let r = dim - equations.len();
    let mut facets = BTreeSet::new();
    for s in subsets(gens.len(), r - 1) {
        let mut rows: Vec<Vec<i64>> = s.iter().map(|&i| gens[i].clone()).collect();
        if !rows.is_empty() && rank(&mat(dim, &rows)) != r - 1 {
            continue;
        }
        rows.extend(equations.iter().cloned());
        let ker = if rows.is_empty() {
            RatMat::identity(dim).rows()
        } else {
            kernel(&mat(dim, &rows))
        };
        if ker.len() != 1 {
            continue;
        }
        let Some(u) = primitive_int(&ker[0]) else { continue };
        let signs: Vec<i128> = gens.iter().map(|x| dot_i64(&u, x)).collect();
        if signs.iter().all(|&v| v >= 0) {
            facets.insert(u);
        } else if signs.iter().all(|&v| v <= 0) {
            facets.insert(u.iter().map(|x| -x).collect());
        }
    }
    (facets.into_iter().collect(), equations)
}
