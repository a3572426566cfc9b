use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QidError {
    #[error("n = {0} is outside the supported range 1..=4 (factorial budget: (4n)! must stay exact in f64)")]
    UnsupportedN(u32),
    #[error("delta = {delta} is not admissible for n = {n}: need 0 < delta <= {max}")]
    InadmissibleDelta { n: u32, delta: f64, max: f64 },
    #[error(
        "quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e}) within {subdivisions} subdivisions"
    )]
    ToleranceNotReached { tolerance: f64, estimate: f64, subdivisions: usize },
    #[error("imaginary residue {residue:e} of a real-valued integral exceeds {limit:e} at x = {x}")]
    RealityViolation { x: f64, residue: f64, limit: f64 },
    #[error("density value {value:e} at x = {x} is negative")]
    NegativeDensity { x: f64, value: f64 },
    #[error("envelope violated at x = {x}: scaled density {scaled} exceeds {envelope}")]
    EnvelopeViolation { x: f64, scaled: f64, envelope: f64 },
    #[error("{0}")]
    DomainError(String),
    #[error("grid value vanishes at t = {0}")]
    ZeroCrossing(f64),
    #[error("adjacent phase increment between t = {t0} and t = {t1} is not resolvable")]
    UnresolvablePhaseJump { t0: f64, t1: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, QidError>;
