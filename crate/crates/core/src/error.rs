use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: relative defect {defect:.3e}")]
    NotHermitian { defect: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("spin quantum number {0} is not a non-negative half-integer")]
    InvalidSpin(f64),

    #[error("drive frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),

    #[error("periodic function has nonzero mean {mean:.3e}")]
    NonZeroMean { mean: f64 },

    #[error("Fourier mode {mode} is undersampled by a {grid}-point grid")]
    Undersampled { mode: i64, grid: usize },

    #[error("invalid drive table: {0}")]
    InvalidTable(String),

    #[error("finite-difference step {step:.3e} is not usable at parameter value {value:.3e}")]
    FiniteDifference { step: f64, value: f64 },

    #[error("time step too coarse: omega*dt = {phase_step:.3} exceeds {limit}")]
    StepGuard { phase_step: f64, limit: f64 },

    #[error("ramp violates the adiabatic guard: g f |dB/dt| / omega^2 = {ratio:.3} >= {limit}")]
    RampTooFast { ratio: f64, limit: f64 },

    #[error("schedule segment {index}: {reason}")]
    InvalidSegment { index: usize, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
