//! Toolkit for sum-distinct sequences over size-capped subset families.
//!
//! A sequence `(a_1, ..., a_n)` of vectors in `Z^k` with coordinates in
//! `[0, M]` is *sum distinct over the family of subsets of size at most
//! `floor(lambda * n)`* when no two distinct such subsets have equal
//! coordinate-wise sums. This crate provides:
//!
//! * [`model`] - the sequence/family/index-set data types, exact counting,
//!   and entropy functions (with an optional high-precision path);
//! * [`constructions`] - explicit sequence builders, parametric in the
//!   certified base occupying the high bits;
//! * [`verifier`] - exact collision search with exhaustive and
//!   meet-in-the-middle engines and canonical witnesses;
//! * [`bounds`] - lower/upper bound formulas, exact pigeonhole
//!   certificates, and comparison tables;
//! * [`search`] - a seeded sample-and-repair constructor and exact
//!   minimal-bound search at small scale.

pub mod bounds;
pub mod constructions;
pub mod model;
pub mod search;
pub mod verifier;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

/// Error taxonomy shared by all modules.
///
/// `Input` covers malformed arguments, `Domain` a formula or construction
/// applied outside its hypotheses, `Capacity` a refused oversize instance,
/// `Construction` a generated candidate that failed certification, and
/// `Contract` a violated caller obligation (e.g. an uncertified base).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Capacity(String),
    #[error("{0}")]
    Construction(String),
    #[error("{0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
