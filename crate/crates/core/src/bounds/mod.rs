//! Ensemble error-correction bounds: entropy and multinomial bounds,
//! generating polynomials, saddle-point exponents, `f(α)`, the radii `α₀` and
//! `α_R`, finite-length failure bounds, and the Gilbert-Varshamov benchmark.

mod entropy;
mod finite_length;
mod gv;
mod optimize;
mod poly;
mod psi;
mod radius;
mod report;
mod saddle;

use thiserror::Error;

pub use entropy::{
    entropy_h, ln_binomial, ln_factorial, ln_stirling_c0, log_multinomial,
    log_multinomial_lower_stirling, log_multinomial_upper_h, log_multinomial_upper_stirling,
};
pub use finite_length::{
    finite_length_bound, Denominator, EtaBound, FiniteLengthCurve, FiniteLengthOptions,
    DEFAULT_PRUNE_NATS,
};
pub use gv::{entropy_q, gv_distance};
pub use optimize::{f_alpha, FAlpha};
pub use poly::{poly_f, poly_g, LogEval, Polynomial};
pub use psi::{
    condition_check, psi, psi_tilde, rho, typical_point, BoundConfig, FractionPoint, Mode, Rho, Tolerances,
    FEASIBILITY_SLACK,
};
pub use radius::{alpha0, alpha_r, best_alpha0, C1Choice, RootBracket};
pub use report::{bound_report, f_sweep, BoundReport, FiniteLengthRequest, Provenance, Witness};
pub use saddle::{saddle_min, saddle_min_mixed, SaddlePoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("invalid entropy argument: {0}")]
    InvalidEntropyArgument(String),
    #[error("multinomial parts sum to {sum}, exceeding n = {n}")]
    InvalidMultinomial { n: u64, sum: u64 },
    #[error("invalid bound configuration: {0}")]
    InvalidConfig(String),
    #[error("guarantee condition violated: {0}")]
    ConditionViolated(String),
    #[error("no sign change of f(alpha) found below alpha = {0}")]
    NoRoot(f64),
    #[error("rate {0} outside (0, 1)")]
    RateOutOfRange(f64),
    #[error("blocklength N = {n} infeasible: {reason}")]
    InfeasibleBlocklength { n: u64, reason: String },
}
