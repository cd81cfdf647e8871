use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("model functions have a pole at beta = 0")]
    BetaPole,

    #[error("invalid model parameters: require 0 < rho2 < rho1, got rho1 = {rho1}, rho2 = {rho2}")]
    InvalidParams { rho1: f64, rho2: f64 },

    #[error("degenerate Riemann data: beta_l == beta_r leaves the shock speed denominator zero")]
    DegenerateData,

    #[error("state dimension mismatch: field expects {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("step size underflow at t = {t:e}: problem too stiff for the explicit integrator")]
    StepUnderflow { t: f64 },

    #[error("no singular configuration exists: requires e0 > 0, got e0 = {e0}")]
    NoConfiguration { e0: f64 },

    #[error("connecting trajectories not verified ({0}); configuration not built")]
    H3NotSatisfied(String),

    #[error("configuration junction mismatch of {gap:.3e} at {junction}")]
    JunctionMismatch { junction: &'static str, gap: f64 },

    #[error("shooting seed construction failed: {0}")]
    Seeding(String),

    #[error("shooting did not converge: best residual {residual:.3e} after {evals} objective evaluations")]
    NoConvergence { residual: f64, evals: usize },

    #[error("integration window error: {0}")]
    Window(String),

    #[error("profile spike does not reach the section: max v = {max_v:.6e} < 1/r0 = {threshold:.6e}")]
    SpikeTooSmall { max_v: f64, threshold: f64 },

    #[error("stored profile carries neither a usable clock nor a formable inner integrand")]
    MissingCrossings,

    #[error("test function support [{lo}, {hi}] exceeds the computed window [{win_lo}, {win_hi}]")]
    SupportOutsideWindow {
        lo: f64,
        hi: f64,
        win_lo: f64,
        win_hi: f64,
    },

    #[error("finite-volume state became non-finite at step {step}")]
    FvBlowUp { step: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("report serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
