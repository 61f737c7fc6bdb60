//! Exact computations in meta-nilpotent quotients `F/F_3 ⋊ Z`: centers,
//! the quadratic knot invariant built from planar diagram codes, and the
//! analogous invariant of surface mapping classes given as Dehn-twist words.
//!
//! All arithmetic is over arbitrary-precision rationals.

pub mod center;
pub mod diagrams;
pub mod exact_algebra;
pub mod knot_pipeline;
pub mod mapping_class;
pub mod nilpotent_group;
pub mod quadratic;

pub use exact_algebra::{QMatrix, Rational, RationalPoly};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Algebra(String),
    #[error("{0}")]
    Hypothesis(String),
    #[error("{0}")]
    Convention(String),
    #[error("{0}")]
    Lookup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
