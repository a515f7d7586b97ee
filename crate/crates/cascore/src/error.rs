use thiserror::Error;

/// Errors produced by graph construction, scoring and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid node id {0}")]
    InvalidNode(usize),

    #[error("unknown node label '{0}'")]
    UnknownLabel(String),

    #[error("invalid community id {0}")]
    InvalidCommunity(usize),

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph has no nodes")]
    NoNodes,

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("node sets do not match: {0}")]
    MismatchedNodes(String),

    #[error("cover has no communities")]
    EmptyCover,

    #[error("ROC requires both outlier and normal labels")]
    SingleClass,

    #[error("empty community collection")]
    NoCommunities,

    #[error("infeasible generator configuration: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
