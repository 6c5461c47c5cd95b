//! Rational cones, polytopes, fans and affine monoids.

mod cone;
mod fan;
mod hilbert;
mod monoid;
mod polytope;

pub use cone::{subsets, RationalCone};
pub use fan::{verify_fan, Fan, FanViolation};
pub use hilbert::{hilbert_basis, parallelepiped_points, triangulate};
pub use monoid::{monoid_preimage, AffineMonoid, Saturation, Truncation};
pub use polytope::{cone_over_polytope, HRep, RationalPolytope};

use crate::error::{Error, Result};
use crate::exact::Rat;

/// Componentwise minimum `P ∧ Q` of two divisors given as labelled
/// coefficients. Labels must agree position by position.
pub fn divisor_min<L: PartialEq + Clone + std::fmt::Debug>(p: &[(L, Rat)], q: &[(L, Rat)]) -> Result<Vec<(L, Rat)>> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    p.iter()
        .zip(q)
        .map(|((lp, a), (lq, b))| {
            if lp != lq {
                return Err(Error::LabelMismatch(format!("{lp:?} vs {lq:?}")));
            }
            Ok((lp.clone(), a.min(b).clone()))
        })
        .collect()
}
