use thiserror::Error;

/// Errors raised across the crate.
///
/// `Internal` is reserved for violations of verified mathematical facts: the
/// library checks every identity it relies on, and a failing check means a
/// bug, never a bad input. The CLI maps it to its own exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invariant violation: {0}")]
    InvalidGroup(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("wrong parity: {0}")]
    WrongParity(String),
    #[error("incompatible eigenspace data: condition ({condition}) failed: {detail}")]
    IncompatibleEigenspaces {
        condition: &'static str,
        detail: String,
    },
    #[error("mismatched domains: {0}")]
    DomainMismatch(String),
    #[error("no even subgroup: {0}")]
    NoEvenSubgroup(String),
    #[error("reality: {0}")]
    NotReal(String),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("degenerate theta: {0}")]
    DegenerateTheta(String),
    #[error("not a field extension: {0}")]
    NotAFieldExtension(String),
    #[error("beta pole: {0}")]
    BetaPole(String),
    #[error("degrees not coprime: {0}")]
    NotCoprime(String),
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("undefined branch: {0}")]
    UndefinedBranch(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Coarse classification used by the CLI to pick an exit code.
    ///
    /// `Domain`: well-formed input rejected on mathematical grounds.
    /// `Input`: malformed or out-of-contract input.
    /// `Internal`: a checked theorem failed; must never happen.
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            NotReal(_) | DegenerateParameter(_) | DegenerateTheta(_) | NotAFieldExtension(_)
            | BetaPole(_) => ErrorKind::Domain,
            Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Input,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Input,
    Internal,
}

pub type Result<T> = std::result::Result<T, Error>;
