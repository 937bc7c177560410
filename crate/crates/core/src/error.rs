use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("no coverage: SNR directly below the base station ({snr_db:.3} dB) is under the threshold ({threshold_db:.3} dB)")]
    NoCoverage { snr_db: f64, threshold_db: f64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
