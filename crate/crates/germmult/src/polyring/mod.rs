//! Exact polynomial arithmetic over the rationals.
//!
//! Everything on the symbolic path (multivariate terms, line restriction,
//! gcd, Sturm sequences, factorization) is exact rational arithmetic.
//! Floating point appears only in [`roots`], always together with
//! certified inclusion radii.

mod bivar;
mod factor;
mod parse;
mod poly;
mod roots;
mod sturm;
mod unipoly;

pub use bivar::{bivariate_gcd, bivariate_squarefree};
pub use factor::{factor_homog_bivariate, factor_unipoly};
pub use parse::poly_parse;
pub use poly::{HomogPoly, Poly};
pub use roots::{complex_roots, complex_roots_f64, CertifiedRoot};
pub use sturm::sturm_count;
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational scalar used throughout the symbolic path.
pub type Q = BigRational;

/// Shorthand for an integer rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for the rational n/d.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("line direction must be nonzero")]
    ZeroDirection,
    #[error("syntax error at byte {at}: {msg}")]
    Syntax { at: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial vanishes at interval endpoint {0}")]
    RootAtEndpoint(String),
    #[error("polynomial is not square-free")]
    NotSquareFree,
    #[error("root iteration did not converge within budget")]
    NonConvergence,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
