use thiserror::Error;

/// Errors produced by the design toolkit and the link simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A caller broke an input-shape contract (block length, state size, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("infeasible group-delay target: {0}")]
    InfeasibleTarget(String),

    #[error("constant phase is ambiguous: weighted response integral vanishes")]
    AmbiguousPhase,

    /// The optimizer met a non-finite cost or gradient; carries the last good iterate.
    #[error("optimizer diverged after {iterations} iterations (last finite cost {last_cost})")]
    Divergence {
        iterations: usize,
        last_cost: f64,
        last_iterate: Vec<f64>,
    },

    #[error("design failed for band {band:?} in stage `{stage}`: {source}")]
    DesignFailure {
        band: Option<usize>,
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("pilot synchronization failed: normalized correlation peak {peak:.3} < 0.5")]
    SyncFailure { peak: f64 },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
