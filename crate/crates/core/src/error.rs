use thiserror::Error;

/// Errors raised while building curves, pricing or running scenario grids.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid hazard curve: {0}")]
    InvalidCurve(String),

    #[error("invalid sigmoid parameters: {0}")]
    InvalidSigmoid(String),

    #[error("invalid CDS quote: {0}")]
    InvalidQuote(String),

    #[error("sigmoid t_start {t_start} does not match last traded CDS maturity {maturity}")]
    SegmentMismatch { t_start: f64, maturity: f64 },

    #[error("CDS premium leg annuity is zero up to maturity {0}")]
    ZeroAnnuity(f64),

    #[error("invalid swap: {0}")]
    InvalidSwap(String),

    #[error("invalid XVA inputs: {0}")]
    InvalidXvaInputs(String),

    #[error("exposure grid ends at {grid_end} but the trade matures at {maturity}")]
    DomainMismatch { grid_end: f64, maturity: f64 },

    #[error("invalid scenario grid: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
