use thiserror::Error;

/// Errors produced by the algebra, certification, and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    #[error("bidegree mismatch: expected ({expected_p},{expected_q}), got ({got_p},{got_q})")]
    BidegreeMismatch {
        expected_p: i32,
        expected_q: i32,
        got_p: i32,
        got_q: i32,
    },

    #[error("form is not real (defect {defect:.3e} exceeds tolerance {tol:.3e})")]
    NotReal { defect: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("hypothesis violated: map for r = {r} is singular (sigma_min = {sigma_min:.3e})")]
    HypothesisFailed { r: u32, sigma_min: f64 },

    #[error("path hypothesis violated at t = {t}: {what} is singular (sigma_min = {sigma_min:.3e})")]
    PathHypothesisFailed { t: f64, what: String, sigma_min: f64 },

    #[error("no PSD certificate below cap c2 = {cap:.3e}; best margin {best_margin:.3e}")]
    NoPsdCertificate { cap: f64, best_margin: f64 },

    #[error("matrix of forms is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
