//! Exponents of the union bound over Γ-partitions: `ρ`, `ψ` and `ψ̃`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use super::entropy::{entropy_unchecked, xlogx_neg};
use super::poly::{poly_f, poly_g, Polynomial};
use super::saddle::{saddle_min, saddle_min_mixed, SaddlePoint};
use super::BoundsError;

/// Slack allowed when checking a point against the constraint polytope.
pub const FEASIBILITY_SLACK: f64 = 1e-12;

/// Normalized partition sizes: `|B| = αN`, `|B_?| = γN`, `|G_?| = δN`,
/// `|J_b| = φNc/d`, and `ωNc` edges between `B` and `J_b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FractionPoint {
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub phi: f64,
    pub omega: f64,
}

/// Which failure event the maximization ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Mode {
    /// Any corrupt set: requires `δ ≥ α - γ`.
    WorstCase,
    /// A fixed (uniformly random) corrupt set leaving at least `νN` errors:
    /// requires `γ + δ ≥ ν`.
    Random { nu: f64 },
}

/// Numerical knobs of the bound computations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Points per axis of the outer `(ω, φ)` grid.
    pub grid_points: usize,
    /// Number of best grid points refined by pattern search.
    pub refine_starts: usize,
    /// Final pattern-search step, in log coordinates.
    pub refine_step: f64,
    /// Relative width at which the 1-D inner maximizations stop.
    pub inner_rel_tol: f64,
    /// Relative bracket width at which root bisection stops.
    pub root_rel_tol: f64,
    /// Multiplicative step of the geometric root scans.
    pub scan_factor: f64,
    /// Lower edge of the `α₀` scan.
    pub alpha_min: f64,
    /// Upper cap of both scans.
    pub alpha_max: f64,
    /// `f̃` values above `-zero_tol` count as zero: the typical configuration
    /// makes `f̃ = 0` exactly once it satisfies the coupling constraint.
    pub zero_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            grid_points: 24,
            refine_starts: 4,
            refine_step: 1e-6,
            inner_rel_tol: 1e-12,
            root_rel_tol: 1e-3,
            scan_factor: 1.25,
            alpha_min: 1e-8,
            alpha_max: 0.5,
            zero_tol: 1e-12,
        }
    }
}

/// Ensemble parameters for the bound computations, with the generating
/// polynomials `F_0..F_3`, `G_0`, `G_1` built once.
#[derive(Clone, Debug)]
pub struct BoundConfig {
    pub c: usize,
    pub d: usize,
    pub t: usize,
    pub c1: usize,
    pub tolerances: Tolerances,
    pub(crate) f: [Polynomial; 4],
    pub(crate) g: [Polynomial; 2],
}

impl BoundConfig {
    pub fn new(c: usize, d: usize, t: usize, c1: usize) -> Result<Self, BoundsError> {
        if c == 0 || t == 0 {
            return Err(BoundsError::InvalidConfig(format!(
                "degree c={c} and radius t={t} must be positive"
            )));
        }
        if d <= t + 1 {
            return Err(BoundsError::InvalidConfig(format!(
                "check degree d={d} must exceed t+1={}",
                t + 1
            )));
        }
        if c1 == 0 || c1 > c {
            return Err(BoundsError::InvalidConfig(format!(
                "flip threshold c1={c1} outside [1, {c}]"
            )));
        }
        Ok(BoundConfig {
            c,
            d,
            t,
            c1,
            tolerances: Tolerances::default(),
            f: [0, 1, 2, 3].map(|i| poly_f(i, c, c1)),
            g: [0, 1].map(|i| poly_g(i, d, t)),
        })
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    /// `C_0 = (2π)^{-i/2} e^{-(i+1)/12}` for an `i`-part multinomial.
    pub fn stirling_c0(&self, i: usize) -> f64 {
        super::entropy::ln_stirling_c0(i).exp()
    }

    /// `C_1 = 1 / C_0`.
    pub fn stirling_c1(&self, i: usize) -> f64 {
        1.0 / self.stirling_c0(i)
    }

    /// Whether the flip threshold admits the worst-case guarantee.
    pub fn condition_holds(&self) -> bool {
        condition_check(self.c, self.c1, self.t)
    }

    pub(crate) fn check_condition(&self) -> Result<(), BoundsError> {
        if self.c1 < 2 {
            return Err(BoundsError::ConditionViolated(format!(
                "c1 = {} must be at least 2",
                self.c1
            )));
        }
        if !self.condition_holds() {
            return Err(BoundsError::ConditionViolated(format!(
                "(c - c1 + 1) * t / (t + 1) = {} * {} / {} is not > 1",
                self.c - self.c1 + 1,
                self.t,
                self.t + 1
            )));
        }
        Ok(())
    }
}

/// `c1 ≥ 2` and `(c - c1 + 1) t / (t + 1) > 1`.
pub fn condition_check(c: usize, c1: usize, t: usize) -> bool {
    // integer form of (c - c1 + 1) t > t + 1
    c1 >= 2 && c1 <= c && (c - c1 + 1) * t > t + 1
}

/// The four saddle-point exponents.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rho {
    pub t1: f64,
    pub t2: f64,
    pub u1: f64,
    pub u2: f64,
}

impl Rho {
    pub fn total(&self) -> f64 {
        self.t1 + self.t2 + self.u1 + self.u2
    }
}

pub(crate) fn saddle_t1(cfg: &BoundConfig, alpha: f64, gamma: f64, omega: f64) -> SaddlePoint {
    let c = cfg.c as f64;
    saddle_min_mixed(
        &[(gamma, &cfg.f[0]), (alpha - gamma, &cfg.f[1])],
        omega * c,
    )
}

pub(crate) fn saddle_t2(cfg: &BoundConfig, alpha: f64, delta: f64, phi_minus_omega: f64) -> SaddlePoint {
    let c = cfg.c as f64;
    saddle_min_mixed(
        &[(delta, &cfg.f[2]), (1.0 - alpha - delta, &cfg.f[3])],
        phi_minus_omega * c,
    )
}

pub(crate) fn saddle_u1(cfg: &BoundConfig, phi: f64, omega: f64) -> SaddlePoint {
    let (c, d) = (cfg.c as f64, cfg.d as f64);
    saddle_min(&cfg.g[0], phi * c / d, omega * c)
}

pub(crate) fn saddle_u2(cfg: &BoundConfig, alpha: f64, phi: f64, omega: f64) -> SaddlePoint {
    let (c, d) = (cfg.c as f64, cfg.d as f64);
    saddle_min(&cfg.g[1], (1.0 - phi) * c / d, (alpha - omega) * c)
}

/// `ρ = t_1 + t_2 + u_1 + u_2`; infeasible points give `-inf` components.
pub fn rho(pt: &FractionPoint, cfg: &BoundConfig) -> Rho {
    Rho {
        t1: saddle_t1(cfg, pt.alpha, pt.gamma, pt.omega).value,
        t2: saddle_t2(cfg, pt.alpha, pt.delta, pt.phi - pt.omega).value,
        u1: saddle_u1(cfg, pt.phi, pt.omega).value,
        u2: saddle_u2(cfg, pt.alpha, pt.phi, pt.omega).value,
    }
}

fn in_unit_simplex(parts: &[f64]) -> bool {
    parts.iter().all(|&p| p >= -FEASIBILITY_SLACK)
        && parts.iter().sum::<f64>() <= 1.0 + FEASIBILITY_SLACK
}

/// `(c/d) h(φ) + ρ - c h(ω, α-ω, φ-ω)`, shared by `ψ` and `ψ̃`.
fn edge_part(pt: &FractionPoint, cfg: &BoundConfig) -> f64 {
    let (c, d) = (cfg.c as f64, cfg.d as f64);
    let edge = [pt.omega, pt.alpha - pt.omega, pt.phi - pt.omega];
    if !in_unit_simplex(&[pt.phi]) || !in_unit_simplex(&edge) {
        return f64::NEG_INFINITY;
    }
    (c / d) * entropy_unchecked(&[pt.phi]) + rho(pt, cfg).total() - c * entropy_unchecked(&edge)
}

/// `ψ = h(γ, α-γ, δ) + (c/d) h(φ) + ρ - c h(ω, α-ω, φ-ω)`.
pub fn psi(pt: &FractionPoint, cfg: &BoundConfig) -> f64 {
    let var = [pt.gamma, pt.alpha - pt.gamma, pt.delta];
    if !in_unit_simplex(&var) {
        return f64::NEG_INFINITY;
    }
    entropy_unchecked(&var) + edge_part(pt, cfg)
}

/// `ψ̃ = α h(γ/α) + (1-α) h(δ/(1-α)) + (c/d) h(φ) + ρ - c h(ω, α-ω, φ-ω)`.
pub fn psi_tilde(pt: &FractionPoint, cfg: &BoundConfig) -> f64 {
    let var = [pt.gamma, pt.alpha - pt.gamma, pt.delta];
    if !in_unit_simplex(&var) || !(pt.alpha > 0.0 && pt.alpha < 1.0) {
        return f64::NEG_INFINITY;
    }
    let split = xlogx_neg(pt.gamma) + xlogx_neg(pt.alpha - pt.gamma) - xlogx_neg(pt.alpha)
        + xlogx_neg(pt.delta)
        + xlogx_neg(1.0 - pt.alpha - pt.delta)
        - xlogx_neg(1.0 - pt.alpha);
    split + edge_part(pt, cfg)
}

/// `P(Bin(n, p) ≥ k)`.
fn binomial_tail(n: usize, p: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    Binomial::new(p, n as u64)
        .expect("probability in [0, 1]")
        .sf(k as u64 - 1)
}

/// The configuration a random graph exhibits with probability tending to one
/// when `B` is a uniformly random set of `αN` variables. It maximizes `ψ̃`
/// with value zero (and `ψ` with value `h(α)`) when no coupling constraint is
/// imposed.
pub fn typical_point(alpha: f64, cfg: &BoundConfig) -> FractionPoint {
    let (c, d, t, c1) = (cfg.c, cfg.d, cfg.t, cfg.c1);
    // probability that the check behind a B (resp. G) socket is in J_b
    let q_b = binomial_tail(d - 1, alpha, t);
    let q_g = binomial_tail(d - 1, alpha, t + 1);
    FractionPoint {
        alpha,
        gamma: alpha * binomial_tail(c, q_b, c - c1 + 1),
        delta: (1.0 - alpha) * binomial_tail(c, q_g, c1),
        phi: binomial_tail(d, alpha, t + 1),
        omega: alpha * q_b,
    }
}

impl FractionPoint {
    /// Largest violation of the constraint polytope (0 when feasible).
    pub fn max_violation(&self, cfg: &BoundConfig, mode: Mode) -> f64 {
        let (c, d, t, c1) = (cfg.c as f64, cfg.d as f64, cfg.t as f64, cfg.c1 as f64);
        let FractionPoint {
            alpha: a,
            gamma: g,
            delta: dl,
            phi: ph,
            omega: om,
        } = *self;
        // each entry must be <= 0
        let mut gaps = vec![
            -g,
            g - a,
            -dl,
            dl - (1.0 - a),
            -om,
            om - a.min(ph),
            (a - om) - (1.0 - ph),
            ph - om * d / (t + 1.0),
            dl - (ph - om) * c / c1,
            g - om * c / (c - c1 + 1.0),
        ];
        gaps.push(match mode {
            Mode::WorstCase => (a - g) - dl,
            Mode::Random { nu } => nu - (g + dl),
        });
        gaps.into_iter().fold(0.0, f64::max)
    }

    pub fn is_feasible(&self, cfg: &BoundConfig, mode: Mode) -> bool {
        self.max_violation(cfg, mode) <= FEASIBILITY_SLACK
    }
}
