//! Exact homological invariants of finite group presentations.
//!
//! The crate builds the chain complex of a presentation 2-complex via free
//! differential calculus, does exact arithmetic in group rings over free
//! and finitely generated abelian groups, reduces integer matrices to
//! Smith normal form, and combines the pieces into reports on H1, H2, the
//! subgroup of spherical 2-cycles, H2 of the group, and an asphericity
//! verdict conditioned on a cohomological-dimension assertion supplied by
//! the caller.

pub mod cli;
pub mod fox;
pub mod group_ring;
pub mod homology;
pub mod jsonnum;
pub mod scalar;
pub mod smith;
pub mod trace_rank;
pub mod words;

pub use scalar::{Gaussian, Int, Scalar};

/// Group-ring element with integer coefficients: the working ring Z[G].
pub type IntElement = group_ring::GroupRingElement<Int>;
/// Group-ring element with exact Gaussian-rational coefficients.
pub type GaussianElement = group_ring::GroupRingElement<Gaussian>;
/// Matrix over Z[G].
pub type IntGroupMatrix = group_ring::GroupRingMatrix<Int>;
/// Matrix over the Gaussian-rational group algebra.
pub type GaussianGroupMatrix = group_ring::GroupRingMatrix<Gaussian>;

/// Tool version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
