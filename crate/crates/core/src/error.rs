use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("cubic coefficients must be positive, got a2 = {a2}, a1 = {a1}, a0 = {a0}")]
    HypothesisViolated { a2: f64, a1: f64, a0: f64 },

    #[error("degenerate diffusion: c and d are both zero")]
    DegenerateDiffusion,

    #[error("no wave train: Upsilon >= 0 (Upsilon = {upsilon})")]
    NoWaveTrain { upsilon: f64 },

    #[error("varsigma = {varsigma} must lie in (0, epsilon) with epsilon = {epsilon}")]
    VarsigmaOutOfRange { varsigma: f64, epsilon: f64 },

    #[error("adaptive step size underflow at t = {t} (h = {h:e})")]
    StepFailure { t: f64, h: f64 },

    #[error("time step {dt} exceeds the diffusion stability bound {bound}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("kernel does not decay below threshold before radius {radius}")]
    SlowDecay { radius: f64 },

    #[error("competition coefficient ell = {ell} is not supported by the PDE simulator")]
    UnsupportedCompetition { ell: f64 },

    #[error("solution became non-finite at t = {t}")]
    NonFinite { t: f64 },
}
