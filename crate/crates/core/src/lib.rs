//! Irreducible polynomials through quadratic (and higher) rational transformations
//! over finite fields.
//!
//! The crate is layered bottom-up: [`field`] and [`poly`] give exact arithmetic,
//! [`moebius`] reduces quadratic rational expressions to canonical form,
//! [`transform`], [`dickson`] and [`higher`] implement the substitutions `f -> f_R`
//! and their inverses, [`counting`] holds the closed-form counts with brute-force
//! oracles, and [`hfactor`] verifies the factorization of
//! `H(x) = a x^(q^n+1) - b (x^(q^n) + x) + c`. [`checks`] bundles the acceptance
//! checks shared by the CLI `selftest` and the test suite.

pub mod checks;
pub mod counting;
pub mod dickson;
pub mod error;
pub mod field;
pub mod hfactor;
pub mod higher;
pub mod linalg;
pub mod moebius;
pub mod poly;
pub mod sample;
pub mod text;
pub mod transform;

pub use error::{Error, Result};
pub use field::{Embedding, Field, FieldElement};
pub use moebius::{CanonicalForm, MoebiusMap, QuadRationalExpr, ReductionTrail, SigmaClass, Step};
pub use poly::{Degree, Poly};

/// Default bound on `q^n + 1`, the degree of `H`, for verification work.
pub const DEFAULT_DEGREE_BOUND: u64 = 4096;

/// The degree bound in effect: `QTK_SIZE_BOUND` if set to a positive integer,
/// otherwise [`DEFAULT_DEGREE_BOUND`].
pub fn degree_bound() -> u64 {
    std::env::var("QTK_SIZE_BOUND")
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_DEGREE_BOUND)
}
