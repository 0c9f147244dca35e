use thiserror::Error;

/// Failures surfaced by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The input is well formed but lies outside the family the algorithms cover.
    #[error("outside scope: {0}")]
    OutsideScope(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error(
        "no trade of length {length} in the {orthant} orthant at t = {t} (requires t > {bound})"
    )]
    NoExtremalTrade {
        orthant: &'static str,
        length: i64,
        t: i64,
        bound: i64,
    },

    /// A result contradicted an invariant that the theory guarantees.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Consistency(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
