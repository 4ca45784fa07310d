use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The subset search would exceed its configured state-space guard.
    #[error("tree of order {n} exceeds the solver capacity of {limit} vertices")]
    Capacity { n: usize, limit: usize },

    /// No cat count up to the configured maximum produced a win.
    #[error("no winning schedule with at most {max_cats} cats")]
    CatLimit { max_cats: usize },

    #[error("malformed tree: {0}")]
    InvalidTree(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
