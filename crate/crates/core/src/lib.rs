//! Exact computations on rational cones, affine monoids, simultaneous
//! Diophantine approximation, superadditive divisorial maps and toric
//! base loci.

pub mod diophantine;
pub mod error;
pub mod exact;
pub mod lp;
pub mod polyhedral;
pub mod pwl;
pub mod serial;
pub mod toric;

pub use error::{Error, Result};
