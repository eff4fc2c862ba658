use thiserror::Error;

/// Errors raised by the calculator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("{what} = {value} out of range {lo}..={hi}")]
    Range {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("names incomparable: {num} / {den}")]
    NamesIncomparable { num: String, den: String },

    #[error("internal invariant broken: {0}")]
    Internal(String),

    #[error("search space too large: about {estimate} nodes, ceiling {ceiling}")]
    SearchTooLarge { estimate: String, ceiling: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
