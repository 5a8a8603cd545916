//! Error conditions surfaced by the solvers and asymptotic evaluators.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no decaying branch bracketed in initial-height range [{lo}, {hi}] (bad lambda/mu or grid too short)")]
    NoDecayingBranch { lo: f64, hi: f64 },

    #[error("residual target not met: defect {achieved:.3e} > {required:.3e}")]
    ToleranceNotReached { achieved: f64, required: f64 },

    #[error("ground state degenerate in the even sector: |mode-0 eig| {mode0:.3e} < 10 |mode-1 eig| {mode1:.3e}")]
    DegenerateGroundState { mode0: f64, mode1: f64 },

    #[error("quadrature failed to converge: relative change {rel:.3e} after {levels} refinements")]
    QuadratureStall { rel: f64, levels: usize },

    #[error("invalid decay class: rate b = {b} must be positive")]
    InvalidDecayClass { b: f64 },

    #[error("invalid case: powers s = {s}, t = {t} must be >= 1")]
    InvalidCase { s: f64, t: f64 },

    #[error("no ground state for the limit equation: {0}")]
    NoGroundState(String),

    #[error("limit profile degenerate in the even sector: |mode-0 eig| {mode0:.3e} < 10 |mode-1 eig| {mode1:.3e}")]
    DegenerateUpsilon { mode0: f64, mode1: f64 },

    #[error("peaks too close: rho/eps = {ratio:.3} < 5 for component {component}")]
    PeaksTooClose { component: usize, ratio: f64 },

    #[error("discrete linearization numerically singular: {0}")]
    SingularLinearization(String),

    #[error("hypothesis violated for regime {regime}: {detail}")]
    HypothesisViolation { regime: String, detail: String },

    #[error("exponent b = {b} outside the valid range for {regime}: {constraint}")]
    InvalidExponent { regime: String, b: f64, constraint: String },

    #[error("beta schedule violated: condition {condition} has ratio {ratio:.3e} >= {limit}")]
    ScheduleViolated { condition: String, ratio: f64, limit: f64 },

    #[error("no sign change of {function} on [{lo:.6e}, {hi:.6e}] (values {f_lo:.3e}, {f_hi:.3e}); hypothesis violation or eps too large")]
    NoSignChange { function: String, lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("Newton did not converge within {max_iter} iterations (residual {residual:.3e})")]
    MaxIterations { max_iter: usize, residual: f64 },

    #[error("Jacobian solve failed: {0} (grid too coarse or regime violation)")]
    JacobianSingular(String),

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("component {component} has no interior peak (collapse or regime failure)")]
    NoInteriorPeak { component: usize },

    #[error("negative value in component {component} at converged state")]
    NegativeSolution { component: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
