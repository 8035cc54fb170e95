use thiserror::Error;

use crate::poly::Variable;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("negative power of non-monomial")]
    NegativePowerOfNonMonomial,

    #[error("invalid variable {0:?}: expected a single lowercase ASCII letter")]
    InvalidVariable(char),

    /// Malformed grammar or expression text. `pos` is a byte offset into the input.
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("duplicate production for '{0}'")]
    DuplicateProduction(Variable),

    #[error("empty bracket group at position {0}")]
    EmptyGroup(usize),

    #[error("a matrix grammar needs at least one sub-grammar")]
    EmptyMatrixGrammar,

    #[error("operator word is empty")]
    EmptyWord,

    #[error("sub-grammar index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("domain error: {0}")]
    Domain(String),
}
