//! Weighted colored adjacency operators on the quotient of the affine
//! building of `PGL4` over `Fq((1/t))` by `PGL4(Fq[t])`, their closed-form
//! simultaneous eigenfunctions, and executable checks of the spectral
//! classification.
//!
//! Module map:
//! - [`geometry`]: vertex representatives, classes, colors, neighbor lists.
//! - [`weights`]: exact stabilizer orders and weights, brute-force oracle.
//! - [`operators`]: exact stencils, operator application, inner products.
//! - [`spectral`]: the `z <-> lambda` dictionary, the set S, families.
//! - [`eigen`]: eigenfunction evaluation in all root-multiplicity regimes.
//! - [`harness`]: recurrences, growth, Weyl sequences, convolution checks.
//! - [`cli`]: subcommand implementations behind the `hecke4` binary.

pub mod cli;
pub mod eigen;
pub mod geometry;
pub mod harness;
pub mod operators;
pub mod report;
pub mod spectral;
pub mod weights;

pub use geometry::{ColorIndex, VertexClass, VertexId};
pub use num_complex::Complex64;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed vertex ({0},{1},{2}): need ell >= m >= n >= 0")]
    InvalidVertex(i64, i64, i64),
    #[error("color step must be 1, 2 or 3, got {0}")]
    InvalidStep(i64),
    #[error("q must be at least 2, got {0}")]
    InvalidQ(u64),
    #[error("q = {0} is not prime; polynomial enumeration needs a prime field")]
    NotPrime(u64),
    #[error("enumeration size {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("product of z is {0}, not 1")]
    ProductConstraint(String),
    #[error("point is not in S")]
    NotInS,
    #[error("near-degenerate z: |z_a - z_b| = {0:e} below threshold")]
    NearDegenerate(f64),
    #[error("coefficient regime mismatch: {0}")]
    RegimeMismatch(String),
    #[error("unsupported root multiplicity {0}")]
    UnsupportedMultiplicity(usize),
    #[error("ell = {0} exceeds the evaluation cap")]
    Range(u32),
    #[error("domain mismatch: radius {0} vs {1}")]
    DomainMismatch(u32, u32),
    #[error("support reaches the truncation boundary")]
    BoundaryTooClose,
    #[error("eps must lie in (0, 1/2), got {0}")]
    EpsOutOfRange(f64),
    #[error("malformed parameters: {0}")]
    Params(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
}

pub(crate) fn check_q(q: u64) -> Result<(), Error> {
    if q < 2 {
        Err(Error::InvalidQ(q))
    } else {
        Ok(())
    }
}
