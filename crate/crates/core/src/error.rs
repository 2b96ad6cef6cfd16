use thiserror::Error;

/// Which of the two samples an observation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    X,
    Y,
}

impl std::fmt::Display for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Group::X => f.write_str("X"),
            Group::Y => f.write_str("Y"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample {group} is empty")]
    EmptySample { group: Group },

    #[error("sample {group} contains a non-finite value at index {index}")]
    NonFinite { group: Group, index: usize },

    /// A cross-sample tie at a threshold order statistic.
    #[error("tie at threshold: value {value} occurs in both samples (threshold taken from {threshold_group})")]
    Tie { value: f64, threshold_group: Group },

    #[error("log_gamma domain error: argument {0} must be positive")]
    Domain(f64),

    #[error("alternating sum did not reach the requested accuracy after {escalations} escalations ({digits} digits)")]
    PrecisionExhausted { escalations: u32, digits: u32 },

    #[error("entry (k={k}, i={i}): {source}")]
    AtEntry {
        k: usize,
        i: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("negative probability {value:e} at (k={k}, i={i}): precision failure")]
    NegativeProbability { k: usize, i: usize, value: f64 },

    #[error("enumeration bound exceeded: m+n = {total} > {limit}")]
    SizeBound { total: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
