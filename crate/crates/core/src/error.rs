use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("zero detuning for pulse {pulse}: the far-detuned elimination needs |Δ| > 0")]
    ZeroDetuning { pulse: u8 },

    #[error("Lamb-Dicke parameter {0} is not below 1, the expansion is invalid")]
    LambDicke(f64),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("no transfer optimum; pulse-2 coupling below damping (κ2D = {kappa_2d:.6e} rad/s, |χ2| = {chi2:.6e} rad/s)")]
    NoTransferOptimum { kappa_2d: f64, chi2: f64 },

    #[error("output modes overlap: window {tm:.6e} s exceeds pulse separation {separation:.6e} s")]
    OutputOverlap { tm: f64, separation: f64 },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
