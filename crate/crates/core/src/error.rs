use thiserror::Error;

pub type Result<T> = std::result::Result<T, HopfieldError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HopfieldError {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// `|λ₂| ≥ 1`: the squeezing step of the diagonalisation does not exist
    /// (effective negative masses).
    #[error("squeezing transformation undefined: |lambda2| = {lambda2} >= 1")]
    InvalidSqueezing { lambda2: f64 },

    #[error("unstable phase: omega_y^2 = {omega_y_sq} < 0 (Hamiltonian unbounded below)")]
    UnstablePhase { omega_y_sq: f64 },

    #[error("critical phase: lower polariton frequency vanishes")]
    CriticalPhase,

    #[error("operation requires g1 == g2 (got g1 = {g1}, g2 = {g2})")]
    NotIsotropic { g1: f64, g2: f64 },

    #[error("quadrature not converged: successive refinements differ by {rel_change:e} (rtol {rtol:e})")]
    QuadratureNotConverged { rel_change: f64, rtol: f64 },

    #[error("QFI continuation pole at g = {g} (n = {n})")]
    PoleAt { g: f64, n: u64 },

    #[error("frequency grid too coarse: step {step} must be below {required}")]
    GridTooCoarse { step: f64, required: f64 },

    #[error("Fock cutoff {cutoff} gives dimension {dim}, above the budget {budget}")]
    CutoffTooLarge {
        cutoff: usize,
        dim: usize,
        budget: usize,
    },

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("ladder sum tail {tail:e} exceeds 1e-12 of the partition function")]
    TailNotConverged { tail: f64 },
}
