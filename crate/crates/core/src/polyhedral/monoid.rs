use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::cone::RationalCone;
use super::hilbert::hilbert_basis;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Saturation {
    Yes,
    No,
    Unknown,
}

/// A finitely generated submonoid `sum N e_i` of `N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMonoid {
    dim: usize,
    gens: Vec<Vec<i64>>,
    saturated: Saturation,
}

/// How to truncate a monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// `S^(κ) = sum N κ e_i`, independent of the generators.
    Uniform(u64),
    /// `sum N κ_i e_i` for the listed generators.
    PerGenerator(Vec<u64>),
}

impl AffineMonoid {
    pub fn new(dim: usize, gens: &[Vec<i64>]) -> Result<Self> {
        Self::with_flag(dim, gens, Saturation::Unknown)
    }

    pub(crate) fn with_flag(dim: usize, gens: &[Vec<i64>], saturated: Saturation) -> Result<Self> {
        let mut g: Vec<Vec<i64>> = Vec::with_capacity(gens.len());
        for v in gens {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().any(|&x| x < 0) {
                return Err(Error::Precondition(format!("generator {v:?} is not in N^{dim}")));
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::Precondition("generators must be nonzero".into()));
            }
            g.push(v.clone());
        }
        Ok(Self {
            dim,
            gens: g,
            saturated,
        })
    }

    /// `N^n` with its standard basis.
    pub fn orthant(dim: usize) -> Self {
        let gens: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        Self {
            dim,
            gens,
            saturated: Saturation::Yes,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn saturation_flag(&self) -> Saturation {
        self.saturated
    }

    /// The cone `S_R`.
    pub fn cone(&self) -> RationalCone {
        RationalCone::new(self.dim, &self.gens).expect("generators share the dimension")
    }

    /// Exact membership by bounded search over generator multiplicities.
    pub fn contains(&self, x: &[i64]) -> bool {
        if x.len() != self.dim || x.iter().any(|&v| v < 0) {
            return false;
        }
        if self.saturated == Saturation::Yes {
            return self.cone().contains_i64(x);
        }
        let mut failed = HashSet::new();
        self.search(x.to_vec(), 0, &mut failed)
    }

    fn search(&self, x: Vec<i64>, start: usize, failed: &mut HashSet<(Vec<i64>, usize)>) -> bool {
        if x.iter().all(|&v| v == 0) {
            return true;
        }
        if failed.contains(&(x.clone(), start)) {
            return false;
        }
        for i in start..self.gens.len() {
            let g = &self.gens[i];
            if g.iter().zip(&x).all(|(a, b)| a <= b) {
                let rest: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
                if self.search(rest, i, failed) {
                    return true;
                }
            }
        }
        failed.insert((x, start));
        false
    }

    /// `S_R ∩ N^n`, generated by the Hilbert basis of `S_R`.
    pub fn saturate(&self) -> AffineMonoid {
        let hb = hilbert_basis(&self.cone()).expect("cones inside N^n are pointed");
        Self {
            dim: self.dim,
            gens: hb,
            saturated: Saturation::Yes,
        }
    }

    /// Decides saturation by testing the Hilbert basis of `S_R` for membership.
    pub fn is_saturated(&self) -> bool {
        match self.saturated {
            Saturation::Yes => true,
            Saturation::No => false,
            Saturation::Unknown => {
                let hb = hilbert_basis(&self.cone()).expect("pointed");
                hb.iter().all(|h| self.contains(h))
            }
        }
    }

    pub fn truncate(&self, t: &Truncation) -> Result<AffineMonoid> {
        let gens: Vec<Vec<i64>> = match t {
            Truncation::Uniform(k) => {
                if *k == 0 {
                    return Err(Error::Precondition("truncation factor must be positive".into()));
                }
                self.gens
                    .iter()
                    .map(|g| g.iter().map(|x| x * *k as i64).collect())
                    .collect()
            }
            Truncation::PerGenerator(ks) => {
                if ks.len() != self.gens.len() {
                    return Err(Error::DimensionMismatch {
                        expected: self.gens.len(),
                        found: ks.len(),
                    });
                }
                if ks.contains(&0) {
                    return Err(Error::Precondition("truncation factors must be positive".into()));
                }
                self.gens
                    .iter()
                    .zip(ks)
                    .map(|(g, k)| g.iter().map(|x| x * *k as i64).collect())
                    .collect()
            }
        };
        let flag = match (t, self.saturated) {
            (Truncation::Uniform(1), s) => s,
            _ => Saturation::Unknown,
        };
        Self::with_flag(self.dim, &gens, flag)
    }
}

/// Generators of `M ∩ λ^{-1}(C)` for an additive map `λ: M → S` given as an
/// integer matrix (one row per target coordinate).
pub fn monoid_preimage(lambda: &[Vec<i64>], target: &RationalCone, m: &AffineMonoid) -> Result<AffineMonoid> {
    let n = target.ambient_dim();
    let d = m.dim();
    if lambda.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: lambda.len(),
        });
    }
    for row in lambda {
        if row.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: row.len(),
            });
        }
    }
    if !m.is_saturated() {
        return Err(Error::Precondition("source monoid must be saturated".into()));
    }
    let apply = |x: &[i64]| -> Vec<i64> {
        lambda
            .iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    };
    let image: Vec<Vec<i64>> = m.generators().iter().map(|g| apply(g)).collect();
    let image_cone = RationalCone::new(n, &image)?;
    for t in target.rays() {
        if !image_cone.contains_i64(t) {
            return Err(Error::NotSurjective(t.clone()));
        }
    }
    // pull back the target's H-representation: u·(λx) = (λ^T u)·x
    let pull = |u: &[i64]| -> Vec<i64> { (0..d).map(|j| (0..n).map(|i| u[i] * lambda[i][j]).sum()).collect() };
    let src = m.cone();
    let mut ineqs: Vec<Vec<i64>> = src.facets().to_vec();
    ineqs.extend(target.facets().iter().map(|u| pull(u)));
    let mut eqs: Vec<Vec<i64>> = src.equations().to_vec();
    eqs.extend(
        target
            .equations()
            .iter()
            .map(|u| pull(u))
            .filter(|v| v.iter().any(|&x| x != 0)),
    );
    let ineqs: Vec<Vec<i64>> = ineqs.into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
    let cone = RationalCone::from_int_inequalities(d, &ineqs, &eqs)?;
    let hb = hilbert_basis(&cone)?;
    AffineMonoid::with_flag(d, &hb, Saturation::Yes)
}
