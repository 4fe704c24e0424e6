use thiserror::Error;

use crate::borel::BorelWitness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{op}: expected a proper nonzero ideal")]
    ImproperOrZero { op: &'static str },

    #[error("variable index {index} out of range for a ring in {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("cannot restrict to {target} variables: generator {generator} uses x{max_var}")]
    SupportBeyond {
        target: usize,
        generator: String,
        max_var: usize,
    },

    #[error("ideal is not of Borel type: {0}")]
    NotBorelType(BorelWitness),

    #[error("ideal is not artinian (no pure power of x{0})")]
    NotArtinian(usize),

    #[error("ideal is not stable: {0}")]
    NotStable(String),

    #[error("not a permutation of 1..{0}")]
    InvalidPermutation(usize),

    #[error("oracle infeasible: {0}")]
    OracleInfeasible(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// An internal invariant failed. Always a bug in this crate.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotBorelType(_) | Error::NotArtinian(_) | Error::NotStable(_) => 1,
            Error::Internal(_) => 3,
            _ => 2,
        }
    }
}
