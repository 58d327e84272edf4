use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("2-adic valuation of zero is undefined")]
    ZeroValuation,

    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },

    #[error("{table}[{index}] = {value} is not a positive integer")]
    NotIntegral {
        table: &'static str,
        index: usize,
        value: String,
    },

    #[error("{what}: {value} is outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: String,
        domain: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Violations of a mathematical invariant, as opposed to bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::NotIntegral { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
