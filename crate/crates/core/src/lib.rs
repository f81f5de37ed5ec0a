//! Exact mean values of products of Dirichlet L-functions at positive integers.
//!
//! The crate has two independent halves that are made to agree:
//!
//! * an exact symbolic side ([`series`], [`formulas`]) that derives closed
//!   formulas of the shape `pi^P * sum_l c_l * phi_l(f) / f^(P-l)` with
//!   rational coefficients, by extracting power-series coefficients of
//!   cotangent expansions and applying a Moebius transform over the divisors
//!   of the modulus;
//! * a numerical oracle ([`oracle`]) that evaluates the same mean values
//!   straight from the definitions — Dirichlet characters, finite cotangent
//!   sums for `L(m, chi)`, and the literal character-tuple averages — in
//!   arbitrary-precision floating point.
//!
//! Nothing on the symbolic side is ever rounded; the oracle side carries
//! explicit precision everywhere.

pub mod arith;
pub mod exact;
pub mod formulas;
pub mod numeric;
pub mod oracle;
pub mod series;

pub use exact::Rational;
pub use formulas::{IdentityReport, MeanValueFormula};
pub use series::PolyQ;

use thiserror::Error;

/// Errors for invalid inputs. Internal consistency violations (a residue
/// polynomial that does not vanish at 1, a mean value with a noticeable
/// imaginary part) are bugs, not user errors, and panic instead.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("exponent vector must have length at least 2")]
    TooFewExponents,
    #[error("exponent sum must be even, got {0}")]
    OddExponentSum(u64),
    #[error("modulus must be greater than 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("character parity does not match the exponent {m}")]
    ParityMismatch { m: u32 },
    #[error("character tuple budget exceeded: phi(f)^(n-1) = {actual} > {budget}")]
    BudgetExceeded { actual: u128, budget: u128 },
    #[error("{0}")]
    InvalidArgument(String),
}
