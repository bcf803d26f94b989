use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("{op}: argument out of domain ({detail})")]
    Domain { op: &'static str, detail: String },

    /// Caller misuse that is not a mathematical domain violation (too few grid nodes, ...).
    #[error("usage error: {0}")]
    Usage(String),

    #[error("{op}: non-finite value at index {index}")]
    Overflow { op: &'static str, index: usize },

    /// A self-convergence test failed. Both estimates are kept for the report.
    #[error("{what} did not converge: coarse {coarse:e}, refined {refined:e}")]
    NonConvergence {
        what: &'static str,
        coarse: f64,
        refined: f64,
    },

    #[error("{what}: truncation budget of {budget} terms exhausted (last term ratio {ratio:e})")]
    Truncation {
        what: &'static str,
        budget: usize,
        ratio: f64,
    },

    #[error("flow step rejected at t = {time}: |z| changed by {drift:e}")]
    StepRejected { time: f64, drift: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        op,
        detail: detail.into(),
    }
}
