//! Symbolic real points, smallest rational affine subspaces, orbit closures
//! in tori and the simultaneous approximation constructions.
//!
//! Irrational coordinates are rational combinations of square roots of
//! squarefree integers, or of user-declared symbols that come with an
//! explicit independence assumption. Every strict inequality is certified
//! by interval refinement, and the sup-norm is used throughout.

mod approx;
mod closure;
mod symbolic;

pub use approx::{
    approximate_anchored, approximate_anchored_with_budget, approximate_simplex, approximate_simplex_with_budget,
    AnchorData, ApproxCertificate, ApproxPoint, DEFAULT_BUDGET,
};
pub use closure::{closure_structure, pushforward_subspace, smallest_rational_affine, ClosureStructure};
pub use symbolic::{
    certify_norm_lt, parse_symbol, DeclaredSymbol, NormBound, RawNumber, RawPoint, RawSymbol, Symbol, SymbolicNumber,
    SymbolicPoint,
};
