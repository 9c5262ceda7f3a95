use thiserror::Error;

use crate::hamiltonians::ProblemKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("collision: |q| = {radius:e} is below the evaluation guard")]
    Collision { radius: f64 },

    #[error("{op} is not defined for the {kind:?} problem")]
    UnsupportedKind { kind: ProblemKind, op: &'static str },

    #[error("energy parameter c = {c} is not above the critical value {critical}")]
    BelowCritical { c: f64, critical: f64 },

    #[error("no admissible root: {0}")]
    NoRoot(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resonant (degenerate) orbit: N*alpha = {value} is within {tol:e} of an integer")]
    Degenerate { value: f64, tol: f64 },

    #[error("torus orbit ({k},{l}) does not exist at c = {c} (window {lo}..{hi})")]
    NotInWindow { k: u32, l: u32, c: f64, lo: f64, hi: f64 },

    #[error("class of iterate {n} is undefined at c = {c}: generator order is {order}")]
    UndefinedClass { n: u32, c: f64, order: u32 },

    #[error("fiber solve failed at p = ({p1}, {p2}), theta = {theta}: {reason}")]
    FiberSolve { p1: f64, p2: f64, theta: f64, reason: String },

    #[error("negative discriminant {value:e}")]
    NegativeDiscriminant { value: f64 },

    #[error("integration aborted near collision at t = {t}")]
    CollisionAbort { t: f64 },

    #[error("integrator step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("no sign change of the shooting residual in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("shooting did not converge after {iters} iterations (residual {residual:e})")]
    NoConvergence { iters: usize, residual: f64 },

    #[error("orbit does not close: gap {gap:e}")]
    OpenLoop { gap: f64 },

    #[error("quadrature tolerance not met: estimated relative error {achieved:e} > {requested:e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
