//! Exact computer algebra for q-deformed calculus in coordinates.
//!
//! Everything is computed over the rationals with arbitrary-precision
//! coefficients; (q-1)-adic completion is modelled by per-value truncation
//! orders and p-adic behaviour is observed through exact p-valuations, never
//! through rounding. The crate is organised as follows:
//!
//! - [`ring`]: sparse multivariate polynomials over Q in the alphabet
//!   `{x_i, d^k(x_i), u}` with `u = q - 1`, plus the text grammar.
//! - [`qanalog`]: q-integers, Gaussian binomials, cyclotomic polynomials and
//!   the Bezout split of a prime against `Phi_{p^n}(q)`.
//! - [`delta`]: the free delta-ring on the `x_i` (Frobenius lift, delta,
//!   divided powers gamma and gamma_q).
//! - [`qcalc`]: Jackson q-derivatives, Koszul-shaped q-de Rham / q-Hodge
//!   complexes and the log-series comparison operator.
//! - [`envelope`]: the rationalised truncated model of the q-divided-power
//!   envelope and its filtration tests.
//! - [`membership`]: ideal-membership certificates (monomial fast path and
//!   bounded-degree Hermite-normal-form search over Z).
//! - [`tower`]: the recursive Gamma_n construction and its per-property
//!   verification reports.

pub mod delta;
pub mod envelope;
pub mod membership;
pub mod qanalog;
pub mod qcalc;
pub mod ring;
pub mod sample;
pub mod tower;

pub use ring::{Monomial, Poly, PrimeContext, Trunc, VarId};

use thiserror::Error;

/// Errors shared across the crate's modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Exact division failed; carries a witness term of the remainder.
    #[error("not divisible: remainder term {witness}")]
    NotDivisible { witness: String },

    /// Inversion requested for a value whose u^0-part is not a nonzero
    /// rational constant.
    #[error("not a unit: u^0-part must be a nonzero rational constant")]
    NotAUnit,

    /// An operation needed delta-depth `needed` but the context caps the
    /// tower at `max`.
    #[error("delta-tower depth exceeded: needed d^{needed}(x{var}), depth bound is {max}")]
    DepthExceeded { var: u32, needed: u32, max: u32 },

    /// A check needed truncation order at least `required` but the value only
    /// carries `available`.
    #[error("insufficient precision: need truncation order >= {required}, have {available}")]
    InsufficientPrecision { required: u32, available: u32 },

    /// A cochain vector had the wrong number of components.
    #[error("dimension mismatch: expected {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A monomial-ideal operation received a non-monomial generator.
    #[error("generator {index} is not a monomial")]
    NonMonomialGenerator { index: usize },

    /// An internally verified identity failed; indicates an arithmetic bug.
    #[error("identity check failed: {0}")]
    IdentityCheckFailed(String),

    /// Invalid construction parameters.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A variable outside the operation's domain appeared in the input.
    #[error("unsupported variable {var} in {operation}")]
    UnsupportedVariable { operation: String, var: String },

    /// Text that does not match the polynomial grammar.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
