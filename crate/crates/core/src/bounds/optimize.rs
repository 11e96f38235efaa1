//! Maximization of `ψ` (or `ψ̃`) over the constraint polytope for fixed `α`.
//!
//! The objective splits as
//!
//! ```text
//! ψ = [e1(γ) + t1(γ; ω)] + [e2(δ) + t2(δ; φ-ω)] + outer(ω, φ)
//! ```
//!
//! where `e1`, `e2` are the variable-node entropies. For fixed `(ω, φ)` the two
//! brackets are concave in `γ` and `δ` and only coupled through the linear
//! constraint `γ + δ ≥ α` (or `≥ ν`), so the inner problem is solved exactly
//! by 1-D root finding on derivatives. The outer `(ω, φ)` problem is not
//! concave; it is searched on a log grid in `(ω/α, φ/ω)` followed by pattern
//! search from the best grid points.

use rayon::prelude::*;
use serde::Serialize;

use super::entropy::{entropy_unchecked, xlogx_neg};
use super::psi::{
    psi, psi_tilde, saddle_t1, saddle_t2, saddle_u1, saddle_u2, typical_point, BoundConfig,
    FractionPoint, Mode,
};
use super::saddle::SaddlePoint;

/// Maximum of `ψ`/`ψ̃` at one `α`, with the attaining point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FAlpha {
    pub value: f64,
    pub witness: Option<FractionPoint>,
}

/// `f(α)` in worst-case mode, `f̃(α, ν)` in random mode. Returns `-inf`
/// without a witness when the feasible region is empty.
pub fn f_alpha(alpha: f64, cfg: &BoundConfig, mode: Mode) -> FAlpha {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha = {alpha} outside (0, 1)");
    let problem = Problem::new(cfg, alpha, mode);
    // Without the coupling constraint the maximizer is the typical point.
    let typical = typical_point(alpha, cfg);
    if typical.gamma + typical.delta >= problem.coupling {
        let value = match mode {
            Mode::WorstCase => psi(&typical, cfg),
            Mode::Random { .. } => psi_tilde(&typical, cfg),
        };
        return FAlpha {
            value,
            witness: Some(typical),
        };
    }
    problem.solve()
}

struct Problem<'a> {
    cfg: &'a BoundConfig,
    alpha: f64,
    mode: Mode,
    /// Right-hand side of the coupling constraint `γ + δ ≥ coupling`.
    coupling: f64,
}

#[derive(Clone, Copy)]
struct Inner {
    value: f64,
    gamma: f64,
    delta: f64,
}

/// log F_a(x) - log F_b(x) at a saddle point, with the limits at `x → 0, ∞`.
fn log_ratio(cfg: &BoundConfig, a: usize, b: usize, sp: &SaddlePoint) -> f64 {
    let (fa, fb) = (&cfg.f[a], &cfg.f[b]);
    if sp.log_x == f64::NEG_INFINITY {
        // fa has the larger minimum degree in both pairs used here
        if fa.min_degree() > fb.min_degree() {
            f64::NEG_INFINITY
        } else {
            fa.log_coefficient(fa.min_degree()) - fb.log_coefficient(fb.min_degree())
        }
    } else if sp.log_x == f64::INFINITY {
        if fa.max_degree() > fb.max_degree() {
            f64::INFINITY
        } else {
            fa.log_coefficient(fa.max_degree()) - fb.log_coefficient(fb.max_degree())
        }
    } else {
        fa.log_eval(sp.log_x).log_value - fb.log_eval(sp.log_x).log_value
    }
}

/// Maximizes a concave function on `[lo, hi]` given its derivative.
/// Derivatives may be `±inf` at the ends.
///
/// The derivative root is sought in log-odds coordinates
/// `z = log((x - lo) / (hi - x))`: entropy terms make the derivative behave
/// like `-z` near either end, so maximizers that hug an endpoint (common
/// here) are found by a few secant steps instead of long bisection runs.
fn maximize_concave(lo: f64, hi: f64, rel_tol: f64, deriv: impl Fn(f64) -> f64) -> f64 {
    const Z_MAX: f64 = 60.0;
    if hi - lo <= rel_tol * hi.abs().max(f64::MIN_POSITIVE) {
        return lo;
    }
    if !(deriv(lo) > 0.0) {
        return lo;
    }
    if !(deriv(hi) < 0.0) {
        return hi;
    }
    let width = hi - lo;
    let at = |z: f64| {
        if z >= 0.0 {
            hi - width / (1.0 + z.exp())
        } else {
            let e = z.exp();
            lo + width * e / (1.0 + e)
        }
    };
    let (mut a, mut b) = (-Z_MAX, Z_MAX);
    let (mut fa, mut fb) = (deriv(at(a)), deriv(at(b)));
    if !(fa > 0.0) {
        return at(a);
    }
    if !(fb < 0.0) {
        return at(b);
    }
    let mut side = 0i8;
    for _ in 0..200 {
        let s = b - fb * (b - a) / (fb - fa);
        let z = if s > a && s < b { s } else { 0.5 * (a + b) };
        let fz = deriv(at(z));
        if fz > 0.0 {
            a = z;
            fa = fz;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else if fz < 0.0 {
            b = z;
            fb = fz;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            return at(z);
        }
        let (xa, xb) = (at(a), at(b));
        if b - a < 1e-12 || xb - xa <= rel_tol * xb.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    at(0.5 * (a + b))
}

impl<'a> Problem<'a> {
    fn new(cfg: &'a BoundConfig, alpha: f64, mode: Mode) -> Self {
        let coupling = match mode {
            Mode::WorstCase => alpha,
            Mode::Random { nu } => nu,
        };
        Problem {
            cfg,
            alpha,
            mode,
            coupling,
        }
    }

    fn split_entropy(&self) -> bool {
        matches!(self.mode, Mode::Random { .. })
    }

    /// `e1(γ) + t1(γ)`.
    fn g1(&self, gamma: f64, omega: f64) -> f64 {
        let a = self.alpha;
        let mut e = xlogx_neg(gamma) + xlogx_neg(a - gamma);
        if self.split_entropy() {
            e -= xlogx_neg(a);
        }
        e + saddle_t1(self.cfg, a, gamma, omega).value
    }

    fn g1_deriv(&self, gamma: f64, omega: f64) -> f64 {
        let a = self.alpha;
        let sp = saddle_t1(self.cfg, a, gamma, omega);
        ((a - gamma).ln() - gamma.ln()) + log_ratio(self.cfg, 0, 1, &sp)
    }

    /// `e2(δ) + t2(δ)`.
    fn g2(&self, delta: f64, excess: f64) -> f64 {
        let a = self.alpha;
        let mut e = xlogx_neg(delta) + xlogx_neg(1.0 - a - delta);
        if self.split_entropy() {
            e -= xlogx_neg(1.0 - a);
        }
        e + saddle_t2(self.cfg, a, delta, excess).value
    }

    fn g2_deriv(&self, delta: f64, excess: f64) -> f64 {
        let a = self.alpha;
        let sp = saddle_t2(self.cfg, a, delta, excess);
        ((1.0 - a - delta).ln() - delta.ln()) + log_ratio(self.cfg, 2, 3, &sp)
    }

    /// Exact maximization over `(γ, δ)` for fixed `(ω, φ)`.
    fn inner(&self, omega: f64, phi: f64) -> Option<Inner> {
        let cfg = self.cfg;
        let (a, c, c1) = (self.alpha, cfg.c as f64, cfg.c1 as f64);
        let excess = phi - omega;
        let tol = cfg.tolerances.inner_rel_tol;

        // Ranges where t1, t2 are finite, intersected with the box constraints.
        let g_lo = ((omega * c - a * (c - c1)) / c1).max(0.0);
        let g_hi = a.min(omega * c / (c - c1 + 1.0));
        let d_lo = ((excess * c - (1.0 - a) * (c1 - 1.0)) / (c - c1 + 1.0)).max(0.0);
        let d_hi = (1.0 - a).min(excess * c / c1);
        if g_lo > g_hi || d_lo > d_hi {
            return None;
        }

        let gamma = maximize_concave(g_lo, g_hi, tol, |g| self.g1_deriv(g, omega));
        let delta = maximize_concave(d_lo, d_hi, tol, |d| self.g2_deriv(d, excess));
        let need = self.coupling;
        let (gamma, delta) = if gamma + delta >= need {
            (gamma, delta)
        } else {
            // The coupling constraint is active: δ = need - γ.
            let lo = g_lo.max(need - d_hi);
            let hi = g_hi.min(need - d_lo);
            if lo > hi {
                return None;
            }
            let g = maximize_concave(lo, hi, tol, |g| {
                self.g1_deriv(g, omega) - self.g2_deriv(need - g, excess)
            });
            (g, (need - g).max(0.0))
        };
        let value = self.g1(gamma, omega) + self.g2(delta, excess);
        value.is_finite().then_some(Inner {
            value,
            gamma,
            delta,
        })
    }

    /// Objective at `(ω, φ)` with the inner problem solved.
    fn outer(&self, omega: f64, phi: f64) -> Option<(f64, Inner)> {
        let cfg = self.cfg;
        let (a, c, d, t) = (self.alpha, cfg.c as f64, cfg.d as f64, cfg.t as f64);
        if !(omega > 0.0 && omega <= a && phi >= omega && phi <= 1.0) {
            return None;
        }
        if phi > omega * d / (t + 1.0) * (1.0 + 1e-14) || a - omega > 1.0 - phi {
            return None;
        }
        let u1 = saddle_u1(cfg, phi, omega).value;
        let u2 = saddle_u2(cfg, a, phi, omega).value;
        if !(u1.is_finite() && u2.is_finite()) {
            return None;
        }
        let inner = self.inner(omega, phi)?;
        let value = inner.value + (c / d) * entropy_unchecked(&[phi]) + u1 + u2
            - c * entropy_unchecked(&[omega, a - omega, phi - omega]);
        value.is_finite().then_some((value, inner))
    }

    /// Search box in `(log s, log r)` with `ω = sα`, `φ = rω`.
    fn search_box(&self) -> ([f64; 2], [f64; 2]) {
        let cfg = self.cfg;
        let (c, d, t, c1) = (cfg.c as f64, cfg.d as f64, cfg.t as f64, cfg.c1 as f64);
        let r_max = d / (t + 1.0);
        // γ + δ ≤ ω c/(c-c1+1) + (φ-ω) c/c1 must reach the coupling bound.
        let reach = c / (c - c1 + 1.0) + (r_max - 1.0) * c / c1;
        // Checks outside J_b absorb at most t edges each: α - ω ≤ t/d.
        let s_min = (self.coupling / self.alpha / reach)
            .max(1.0 - t / (d * self.alpha))
            .clamp(1e-12, 1.0);
        ([s_min.ln(), 0.0], [0.0, r_max.ln()])
    }

    fn eval_log(&self, p: [f64; 2]) -> f64 {
        let omega = self.alpha * p[0].exp().min(1.0);
        let phi = omega * p[1].exp();
        self.outer(omega, phi).map_or(f64::NEG_INFINITY, |(v, _)| v)
    }

    fn solve(&self) -> FAlpha {
        let tol = &self.cfg.tolerances;
        let n = tol.grid_points.max(2);
        let (s_range, r_range) = self.search_box();
        let axis = |range: [f64; 2], i: usize| range[0] + (range[1] - range[0]) * i as f64 / (n - 1) as f64;

        let mut grid: Vec<([f64; 2], f64)> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let p = [axis(s_range, k / n), axis(r_range, k % n)];
                (p, self.eval_log(p))
            })
            .collect();
        grid.retain(|(_, v)| v.is_finite());
        if grid.is_empty() {
            return FAlpha {
                value: f64::NEG_INFINITY,
                witness: None,
            };
        }
        grid.sort_by(|x, y| y.1.total_cmp(&x.1));
        grid.truncate(tol.refine_starts.max(1));

        let steps = [
            (s_range[1] - s_range[0]) / (n - 1) as f64,
            (r_range[1] - r_range[0]) / (n - 1) as f64,
        ];
        let refined: Vec<([f64; 2], f64)> = grid
            .into_par_iter()
            .map(|(p, v)| self.pattern_search(p, v, steps, [s_range, r_range]))
            .collect();
        let (best, _) = refined
            .into_iter()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("nonempty");

        let omega = self.alpha * best[0].exp().min(1.0);
        let phi = omega * best[1].exp();
        let (value, inner) = self.outer(omega, phi).expect("refined point stays feasible");
        FAlpha {
            value,
            witness: Some(FractionPoint {
                alpha: self.alpha,
                gamma: inner.gamma,
                delta: inner.delta,
                phi,
                omega,
            }),
        }
    }

    /// Compass search in log coordinates, clamped to the box.
    fn pattern_search(
        &self,
        mut p: [f64; 2],
        mut v: f64,
        mut steps: [f64; 2],
        bounds: [[f64; 2]; 2],
    ) -> ([f64; 2], f64) {
        let min_step = self.cfg.tolerances.refine_step;
        while steps[0].max(steps[1]) > min_step {
            let mut moved = false;
            for axis in 0..2 {
                for dir in [1.0, -1.0] {
                    let mut q = p;
                    q[axis] = (q[axis] + dir * steps[axis]).clamp(bounds[axis][0], bounds[axis][1]);
                    if q == p {
                        continue;
                    }
                    let w = self.eval_log(q);
                    if w > v {
                        p = q;
                        v = w;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                steps[0] *= 0.5;
                steps[1] *= 0.5;
            }
        }
        (p, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::entropy::entropy_h;

    #[test]
    fn concave_maximizer() {
        // -(x - 0.3)^2 on [0, 1]
        let x = maximize_concave(0.0, 1.0, 1e-12, |x| -2.0 * (x - 0.3));
        assert!((x - 0.3).abs() < 1e-10);
        assert_eq!(maximize_concave(0.5, 1.0, 1e-12, |x| -2.0 * (x - 0.3)), 0.5);
        assert_eq!(maximize_concave(0.0, 0.2, 1e-12, |x| -2.0 * (x - 0.3)), 0.2);
        // infinite derivatives at the ends, as with entropy terms
        let x = maximize_concave(0.0, 1.0, 1e-12, |x| ((1.0 - x) / x).ln());
        assert!((x - 0.5).abs() < 1e-10);
    }

    #[test]
    fn witness_is_feasible_and_attains_value() {
        let cfg = BoundConfig::new(4, 30, 3, 3).unwrap();
        for &alpha in &[1e-6, 1e-4, 1e-3] {
            let f = f_alpha(alpha, &cfg, Mode::WorstCase);
            let w = f.witness.expect("feasible region is nonempty");
            assert!(w.is_feasible(&cfg, Mode::WorstCase), "{w:?}");
            assert!((psi(&w, &cfg) - f.value).abs() < 1e-9 * f.value.abs().max(1e-9));
        }
        let mode = Mode::Random { nu: 1e-4 };
        let f = f_alpha(0.01, &cfg, mode);
        let w = f.witness.unwrap();
        assert!(w.is_feasible(&cfg, mode));
        assert!((psi_tilde(&w, &cfg) - f.value).abs() < 1e-9 * f.value.abs().max(1e-9));
    }

    #[test]
    fn typical_point_has_zero_exponent() {
        let cfg = BoundConfig::new(4, 30, 3, 3).unwrap();
        for &alpha in &[1e-3, 0.02, 0.1, 0.4] {
            let p = typical_point(alpha, &cfg);
            assert!(p.is_feasible(&cfg, Mode::Random { nu: 0.0 }), "{p:?}");
            assert!(psi_tilde(&p, &cfg).abs() < 1e-9, "{alpha}: {}", psi_tilde(&p, &cfg));
            let h = entropy_h(&[alpha]).unwrap();
            assert!((psi(&p, &cfg) - h).abs() < 1e-9);
        }
    }

    #[test]
    fn search_never_beats_typical_point() {
        // With a coupling bound the typical point already satisfies, the grid
        // search is the only route and must stay below zero.
        let cfg = BoundConfig::new(4, 30, 3, 3).unwrap();
        let alpha = 0.03;
        let typ = typical_point(alpha, &cfg);
        let nu = 0.5 * (typ.gamma + typ.delta);
        let searched = Problem::new(&cfg, alpha, Mode::Random { nu }).solve();
        assert!(searched.value <= 1e-12, "{}", searched.value);
        assert!(searched.value > -1e-6, "{}", searched.value);
    }

    #[test]
    fn tiny_alpha_is_negative() {
        let cfg = BoundConfig::new(4, 30, 3, 3).unwrap();
        assert!(f_alpha(1e-7, &cfg, Mode::WorstCase).value < 0.0);
    }
}
