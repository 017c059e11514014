use thiserror::Error;

/// Errors raised by the analysis and simulation routines.
///
/// Numeric context is carried as `f64` whatever scalar type produced it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("kernel transfer function has a pole at lambda = {re} + {im}i")]
    KernelPole { re: f64, im: f64 },

    #[error("no interior equilibrium for these parameters")]
    NoInteriorEquilibrium,

    #[error("no Hopf point: {0}")]
    NoHopfPoint(String),

    #[error("degenerate crossing: dD3/dq vanishes at q0 = {0}")]
    DegenerateCrossing(f64),

    #[error("no arctan branch j in 0..={max_branch} satisfies the characteristic equation (best residual {best_residual:e})")]
    BranchInconsistency { max_branch: usize, best_residual: f64 },

    #[error("transversality fails: Re lambda' = {0:e}")]
    Transversality(f64),

    #[error("adjoint normalization is degenerate (|eta| = {0:e})")]
    DegenerateNormalization(f64),

    #[error("resonant linear system in the normal-form computation (condition estimate {0:e})")]
    Resonance(f64),

    #[error("bilinear pairing diverges: {0}")]
    DivergentPairing(String),

    #[error("invalid simulation config: {0}")]
    InvalidSimConfig(String),

    #[error("integration diverged after t = {t_last_valid}")]
    Divergence { t_last_valid: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
