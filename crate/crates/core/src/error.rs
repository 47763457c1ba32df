use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A size cap was hit. `what` names the structure being built.
    #[error("{what}: size {actual} exceeds cap {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },
    #[error("valuation budget exceeded: {needed} valuations needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("malformed operation tables: {0}")]
    MalformedTables(String),
    #[error("not a partial order: {0}")]
    NotAPoset(String),
    #[error("partition is not a congruence: {0}")]
    NotACongruence(String),
    #[error("element set is not a prime filter: {0}")]
    NotPrime(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("variable x{0} is not bound by the valuation")]
    UnboundVariable(u32),
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("bad join-irreducible index: {0}")]
    BadIndex(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    /// An internal cross-check between two independent routes disagreed.
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, limit: usize, actual: u128) -> Self {
        Error::CapExceeded {
            what,
            limit: limit as u128,
            actual,
        }
    }
}
