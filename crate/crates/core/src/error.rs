use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("division by the zero class")]
    DivisionByZero,

    #[error("{0}")]
    Domain(String),

    #[error("variable registries do not match")]
    RegistryMismatch,

    #[error("coefficient domains do not match")]
    DomainMismatch,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("enumeration budget exceeded: {space} points > budget {budget} (p^N = {p}^{nvars})")]
    Budget {
        p: u32,
        nvars: usize,
        space: String,
        budget: String,
    },

    #[error("invalid resolution data: {0}")]
    Validation(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
