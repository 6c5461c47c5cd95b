use serde::Serialize;

use super::cone::RationalCone;
use crate::error::{Error, Result};
use crate::exact::{dot_i64, rvec, RatVec};

/// A finite collection of cones claimed to subdivide `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub cones: Vec<RationalCone>,
    pub support: RationalCone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FanViolation {
    /// A generator of `cone` lies outside the support.
    OutsideSupport { cone: usize, ray: Vec<i64> },
    /// The intersection of two cones is not a face of both; the witness
    /// lies in the relative interior of the intersection.
    BadIntersection {
        first: usize,
        second: usize,
        #[serde(with = "crate::serial::rat_vec")]
        witness: RatVec,
    },
    /// A point of the support covered by no cone.
    Uncovered {
        #[serde(with = "crate::serial::rat_vec")]
        witness: RatVec,
    },
}

impl Fan {
    pub fn new(cones: Vec<RationalCone>, support: RationalCone) -> Result<Self> {
        for c in &cones {
            if c.ambient_dim() != support.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: support.ambient_dim(),
                    found: c.ambient_dim(),
                });
            }
            if !c.is_pointed() {
                return Err(Error::NotPointed);
            }
        }
        Ok(Self { cones, support })
    }

    /// Index of a cone containing `x`, if any.
    pub fn locate(&self, x: &[i64]) -> Option<usize> {
        self.cones.iter().position(|c| c.contains_i64(x))
    }
}

/// Checks that cones meet in common faces and that their union is the
/// support. Returns the first violation found.
pub fn verify_fan(fan: &Fan) -> Result<Option<FanViolation>> {
    let support = &fan.support;
    for (i, c) in fan.cones.iter().enumerate() {
        if let Some(r) = c.rays().iter().find(|r| !support.contains_i64(r)) {
            return Ok(Some(FanViolation::OutsideSupport {
                cone: i,
                ray: r.clone(),
            }));
        }
    }
    for i in 0..fan.cones.len() {
        for j in i + 1..fan.cones.len() {
            let (a, b) = (&fan.cones[i], &fan.cones[j]);
            let inter = a.intersection(b)?;
            let p = rvec(&inter.interior_point());
            if a.face_containing(&p) != inter || b.face_containing(&p) != inter {
                return Ok(Some(FanViolation::BadIntersection {
                    first: i,
                    second: j,
                    witness: p,
                }));
            }
        }
    }
    Ok(coverage_violation(fan).map(|w| FanViolation::Uncovered { witness: rvec(&w) }))
}

fn support_interior_point(support: &RationalCone) -> Vec<i64> {
    let p = support.interior_point();
    if support.relint_contains(&rvec(&p)) && p.iter().any(|&x| x != 0) {
        return p;
    }
    // non-pointed supports: search a small box for a relative interior point
    let d = support.ambient_dim();
    let mut cur = vec![-2i64; d];
    loop {
        if cur.iter().any(|&x| x != 0) && support.relint_contains(&rvec(&cur)) {
            return cur;
        }
        let mut i = 0;
        loop {
            if i == d {
                return p;
            }
            cur[i] += 1;
            if cur[i] > 2 {
                cur[i] = -2;
                i += 1;
            } else {
                break;
            }
        }
    }
}

fn uncovered(fan: &Fan, x: &[i64]) -> bool {
    fan.support.contains_i64(x) && fan.locate(x).is_none()
}

fn coverage_violation(fan: &Fan) -> Option<Vec<i64>> {
    let s = fan.support.cone_dim();
    if s == 0 {
        return None;
    }
    let full: Vec<&RationalCone> = fan.cones.iter().filter(|c| c.cone_dim() == s).collect();
    if full.is_empty() {
        return Some(support_interior_point(&fan.support));
    }
    if s == 1 {
        // a ray or a line: every generator direction must be covered
        return fan.support.rays().iter().find(|r| fan.locate(r).is_none()).cloned();
    }
    for c in &full {
        for u in c.facets() {
            let facet_rays: Vec<&Vec<i64>> = c.rays().iter().filter(|r| dot_i64(u, r) == 0).collect();
            let mut q = vec![0i64; c.ambient_dim()];
            for r in &facet_rays {
                for (x, y) in q.iter_mut().zip(r.iter()) {
                    *x += y;
                }
            }
            let on_boundary = fan.support.facets().iter().any(|w| dot_i64(w, &q) == 0);
            if on_boundary {
                continue;
            }
            let neighbour = full
                .iter()
                .any(|o| !std::ptr::eq(*o, *c) && o.contains_i64(&q) && o.rays().iter().any(|r| dot_i64(u, r) < 0));
            if neighbour {
                continue;
            }
            let y = c
                .rays()
                .iter()
                .find(|r| dot_i64(u, r) > 0)
                .expect("facet of a full cone");
            let mut n = 1i64;
            while n < 1 << 24 {
                let w: Vec<i64> = q.iter().zip(y).map(|(a, b)| n * a - b).collect();
                if uncovered(fan, &w) {
                    return Some(w);
                }
                n *= 2;
            }
            return Some(q);
        }
    }
    None
}
