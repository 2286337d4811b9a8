//! Exact arithmetic kernel: coefficients in `Q(√d)`, sparse Laurent
//! polynomials over a named variable table, localization at a pivot,
//! substitution and symmetric functions.

mod coeff;
mod localized;
mod poly;
mod ring;
mod subst;
pub mod symmetric;
mod text;

pub use coeff::{Coefficient, QuadraticExtension};
pub use localized::Localized;
pub use poly::{Exponent, Monomial, Polynomial};
pub use ring::{Ring, VarKind, VarTable, Variable};
pub use subst::Substitution;
pub use text::{coefficient_text, rational_text};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("localized operands have different pivots")]
    PivotMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    BadVariableName(String),
    #[error("negative exponent on polynomial variable `{0}`")]
    NegativeExponent(String),
    #[error("radical coefficient in a ring without quadratic extension")]
    RadicalWithoutExtension,
    #[error("invalid quadratic extension: {0}")]
    BadExtension(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("value is not invertible in the localized ring")]
    NotInvertible,
    #[error("value assigned to `{0}` is not invertible but occurs with a negative exponent")]
    NotInvertibleValue(String),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}
