//! Complete simplicial toric varieties of dimension at most three, where
//! sections, fixed parts, asymptotic orders of vanishing and base loci are
//! exact lattice-point and linear-programming computations on divisor
//! polytopes.

mod families;
mod invariants;
mod variety;

pub use families::{
    chamber_decomposition, chamber_truncations, multigraded_generators, not_in_b_region, section_cone,
    ChamberDecomposition, DivisorFamily, MobOracle, SectionGenerator,
};
pub use invariants::{
    asymptotic_ord, base_locus, divisor_polytope, fix_mob, h0, ord_limit, ord_vector, restrict_to_ray, restricted_ord,
    sections, vanishing, BaseLocus, FixMob, LocusMode, OrdValue, RestrictedOrd, Restriction,
};
pub use variety::{RawVariety, TDivisor, ToricVariety, MAX_TORIC_DIM};
