//! Superadditive maps on monoids: straightening, additivity up to
//! truncation, and verification of piecewise-linear claims.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{add, rint, scale, to_rat_vec, Rat, RatMat, RatVec};
use crate::polyhedral::{hilbert_basis, verify_fan, AffineMonoid, Fan, RationalCone};

/// A superadditive map `f: S → Q^c`, queried pointwise, with stabilization
/// data: `f` restricted to `N ι_s s` is additive.
pub trait RayOracle {
    fn domain(&self) -> &AffineMonoid;
    fn eval(&self, s: &[i64]) -> Result<RatVec>;
    fn stabilization(&self, s: &[i64]) -> Option<u64>;
}

/// A [`RayOracle`] built from closures.
pub struct FnOracle<F, G> {
    domain: AffineMonoid,
    f: F,
    iota: G,
}

impl<F, G> FnOracle<F, G>
where
    F: Fn(&[i64]) -> RatVec,
    G: Fn(&[i64]) -> Option<u64>,
{
    pub fn new(domain: AffineMonoid, f: F, iota: G) -> Self {
        Self { domain, f, iota }
    }
}

impl<F, G> RayOracle for FnOracle<F, G>
where
    F: Fn(&[i64]) -> RatVec,
    G: Fn(&[i64]) -> Option<u64>,
{
    fn domain(&self) -> &AffineMonoid {
        &self.domain
    }

    fn eval(&self, s: &[i64]) -> Result<RatVec> {
        Ok((self.f)(s))
    }

    fn stabilization(&self, s: &[i64]) -> Option<u64> {
        (self.iota)(s)
    }
}

fn mul(s: &[i64], k: i64) -> Vec<i64> {
    s.iter().map(|x| x * k).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StraightenedRay {
    pub ray: Vec<i64>,
    pub iota: u64,
    /// `f^♯(ray) = f(ι ray) / ι`
    #[serde(with = "crate::serial::rat_vec")]
    pub value: RatVec,
}

/// Number of consecutive differences checked per ray.
pub const STABILIZATION_SAMPLES: u64 = 6;

/// `f^♯(s)`, after checking that `m ↦ f(ι m s)` has constant differences
/// for `m <= samples`.
pub fn straighten_one(f: &dyn RayOracle, s: &[i64], samples: u64) -> Result<StraightenedRay> {
    let iota = f
        .stabilization(s)
        .ok_or_else(|| Error::MissingStabilization(s.to_vec()))?;
    if iota == 0 {
        return Err(Error::MissingStabilization(s.to_vec()));
    }
    let step = f.eval(&mul(s, iota as i64))?;
    let mut prev = step.clone();
    for m in 2..=samples.max(2) {
        let cur = f.eval(&mul(s, iota as i64 * m as i64))?;
        if add(&prev, &step) != cur {
            return Err(Error::StabilizationViolated {
                ray: s.to_vec(),
                multiple: m,
            });
        }
        prev = cur;
    }
    Ok(StraightenedRay {
        ray: s.to_vec(),
        iota,
        value: scale(&step, &Rat::new(1.into(), iota.into())),
    })
}

pub fn straighten(f: &dyn RayOracle, rays: &[Vec<i64>]) -> Result<Vec<StraightenedRay>> {
    rays.iter()
        .map(|s| straighten_one(f, s, STABILIZATION_SAMPLES))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TruncationVerdict {
    /// `f(i p s) = i f(p s)` and `f(p s1) + f(p s2) = f(p (s1 + s2))` on the
    /// Hilbert basis, for every sampled `i`.
    Additive {
        p: u64,
        hilbert_basis: Vec<Vec<i64>>,
        samples: u64,
    },
    /// `f^♯` is not additive on the cone, so no truncation is additive.
    Counterexample {
        s1: Vec<i64>,
        s2: Vec<i64>,
        #[serde(with = "crate::serial::rat_vec")]
        lhs: RatVec,
        #[serde(with = "crate::serial::rat_vec")]
        rhs: RatVec,
    },
    Inconclusive {
        p_max: u64,
    },
}

fn check_domain(f: &dyn RayOracle, cone: &RationalCone) -> Result<Vec<Vec<i64>>> {
    let hb = hilbert_basis(cone)?;
    if let Some(s) = hb.iter().find(|s| !f.domain().contains(s)) {
        return Err(Error::Precondition(format!(
            "cone point {s:?} is not in the domain monoid"
        )));
    }
    Ok(hb)
}

/// Searches the least `p <= p_max` for which `f` is additive on the
/// truncation `p (C ∩ S)`, checking multiples `i <= samples`.
pub fn check_additivity_up_to_truncation(
    f: &dyn RayOracle,
    cone: &RationalCone,
    p_max: u64,
    samples: u64,
) -> Result<TruncationVerdict> {
    let hb = check_domain(f, cone)?;
    // f^♯ additivity on Hilbert basis pairs decides the question outright
    for (a, s1) in hb.iter().enumerate() {
        for s2 in &hb[a..] {
            let sum: Vec<i64> = s1.iter().zip(s2).map(|(x, y)| x + y).collect();
            let (Some(_), Some(_), Some(_)) = (f.stabilization(s1), f.stabilization(s2), f.stabilization(&sum)) else {
                continue;
            };
            let lhs = add(
                &straighten_one(f, s1, STABILIZATION_SAMPLES)?.value,
                &straighten_one(f, s2, STABILIZATION_SAMPLES)?.value,
            );
            let rhs = straighten_one(f, &sum, STABILIZATION_SAMPLES)?.value;
            if lhs != rhs {
                return Ok(TruncationVerdict::Counterexample {
                    s1: s1.clone(),
                    s2: s2.clone(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    'p: for p in 1..=p_max {
        let pi = p as i64;
        let base: Vec<RatVec> = hb.iter().map(|s| f.eval(&mul(s, pi))).collect::<Result<_>>()?;
        for (s, fs) in hb.iter().zip(&base) {
            for i in 2..=samples as i64 {
                if f.eval(&mul(s, pi * i))? != scale(fs, &rint(i)) {
                    continue 'p;
                }
            }
        }
        for a in 0..hb.len() {
            for b in a..hb.len() {
                let sum: Vec<i64> = hb[a].iter().zip(&hb[b]).map(|(x, y)| (x + y) * pi).collect();
                if f.eval(&sum)? != add(&base[a], &base[b]) {
                    continue 'p;
                }
            }
        }
        return Ok(TruncationVerdict::Additive {
            p,
            hilbert_basis: hb,
            samples,
        });
    }
    Ok(TruncationVerdict::Inconclusive { p_max })
}

/// A map that is linear on each cone of a fan: `s ↦ pieces[i] s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwlMap {
    fan: Fan,
    pieces: Vec<RatMat>,
}

impl PwlMap {
    /// Checks dimensions and that pieces agree on shared rays.
    pub fn new(fan: Fan, pieces: Vec<RatMat>) -> Result<Self> {
        if pieces.len() != fan.cones.len() {
            return Err(Error::DimensionMismatch {
                expected: fan.cones.len(),
                found: pieces.len(),
            });
        }
        let d = fan.support.ambient_dim();
        let c = pieces.first().map_or(0, RatMat::nrows);
        for m in &pieces {
            if m.ncols() != d || m.nrows() != c {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: m.ncols(),
                });
            }
        }
        for i in 0..fan.cones.len() {
            for j in i + 1..fan.cones.len() {
                let shared = fan.cones[i].intersection(&fan.cones[j])?;
                for r in shared.rays() {
                    let v = to_rat_vec(r);
                    if pieces[i].mul_vec(&v)? != pieces[j].mul_vec(&v)? {
                        return Err(Error::Precondition(format!("pieces {i} and {j} disagree on ray {r:?}")));
                    }
                }
            }
        }
        Ok(Self { fan, pieces })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn pieces(&self) -> &[RatMat] {
        &self.pieces
    }

    pub fn eval(&self, s: &[i64]) -> Option<RatVec> {
        let i = self.fan.locate(s)?;
        self.pieces[i].mul_vec(&to_rat_vec(s)).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PwlVerdict {
    Verified {
        points_checked: usize,
    },
    Disagreement {
        cone: usize,
        point: Vec<i64>,
        #[serde(with = "crate::serial::rat_vec")]
        claimed: RatVec,
        #[serde(with = "crate::serial::rat_vec")]
        actual: RatVec,
    },
}

/// Compares `f^♯` with the claimed linear piece on every Hilbert basis
/// element of every cone and on `budget` seeded random points per cone.
pub fn verify_pwl(f: &dyn RayOracle, claim: &PwlMap, budget: usize, seed: u64) -> Result<PwlVerdict> {
    if let Some(v) = verify_fan(claim.fan())? {
        return Err(Error::FanViolation(format!("{v:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    for (i, cone) in claim.fan().cones.iter().enumerate() {
        let hb = check_domain(f, cone)?;
        let mut points = hb.clone();
        if !hb.is_empty() {
            while points.len() < hb.len() + budget {
                let p: Vec<i64> = hb.iter().fold(vec![0; cone.ambient_dim()], |acc, h| {
                    let c: i64 = rng.gen_range(0..=4);
                    acc.iter().zip(h).map(|(a, b)| a + c * b).collect()
                });
                if p.iter().any(|&x| x != 0) {
                    points.push(p);
                }
            }
        }
        for p in points {
            let actual = straighten_one(f, &p, STABILIZATION_SAMPLES)?.value;
            let claimed = claim.pieces[i].mul_vec(&to_rat_vec(&p))?;
            checked += 1;
            if actual != claimed {
                return Ok(PwlVerdict::Disagreement {
                    cone: i,
                    point: p,
                    claimed,
                    actual,
                });
            }
        }
    }
    Ok(PwlVerdict::Verified {
        points_checked: checked,
    })
}
