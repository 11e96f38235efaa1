//! Saddle-point upper bounds on generating-function coefficients.
//!
//! For polynomials with nonnegative coefficients,
//! `[x^k] Π F_i(x)^{L_i} ≤ inf_{x>0} Π F_i(x)^{L_i} / x^k`. In `u = log x` the
//! objective `Σ L_i log F_i(e^u) - k u` is convex, so the infimum is the root of
//! its derivative `Σ L_i · mean_i(u) - k`, which is increasing in `u`.

use super::poly::Polynomial;

/// Relative slack used to decide that `k` sits exactly on a degree boundary.
const BOUNDARY_REL_TOL: f64 = 1e-10;
const NEWTON_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 200;

/// Infimum value and the minimizing `u = log x` (`±inf` when the infimum is a
/// limit at `x → 0` or `x → ∞`, NaN when the configuration is infeasible).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SaddlePoint {
    pub value: f64,
    pub log_x: f64,
}

impl SaddlePoint {
    pub fn is_feasible(&self) -> bool {
        self.value > f64::NEG_INFINITY
    }

    pub fn x(&self) -> f64 {
        self.log_x.exp()
    }

    const INFEASIBLE: SaddlePoint = SaddlePoint {
        value: f64::NEG_INFINITY,
        log_x: f64::NAN,
    };
}

/// `inf_{x>0} L log F(x) - k log x`.
pub fn saddle_min(poly: &Polynomial, weight: f64, k: f64) -> SaddlePoint {
    saddle_min_mixed(&[(weight, poly)], k)
}

/// `inf_{x>0} Σ L_i log F_i(x) - k log x` over a single shared `x`.
pub fn saddle_min_mixed(terms: &[(f64, &Polynomial)], k: f64) -> SaddlePoint {
    let active = || terms.iter().filter(|(w, _)| *w > 0.0);
    let lo: f64 = active().map(|(w, p)| w * p.min_degree() as f64).sum();
    let hi: f64 = active().map(|(w, p)| w * p.max_degree() as f64).sum();
    let tol = BOUNDARY_REL_TOL * hi.max(k.abs()).max(f64::MIN_POSITIVE);

    if k < lo - tol || k > hi + tol {
        return SaddlePoint::INFEASIBLE;
    }
    if k <= lo + tol {
        // x → 0: only the lowest-degree terms survive.
        let value = active()
            .map(|(w, p)| w * p.log_coefficient(p.min_degree()))
            .sum();
        return SaddlePoint {
            value,
            log_x: f64::NEG_INFINITY,
        };
    }
    if k >= hi - tol {
        let value = active()
            .map(|(w, p)| w * p.log_coefficient(p.max_degree()))
            .sum();
        return SaddlePoint {
            value,
            log_x: f64::INFINITY,
        };
    }

    let eval = |u: f64| -> (f64, f64, f64) {
        let (mut val, mut mean, mut var) = (0.0, 0.0, 0.0);
        for (w, p) in active() {
            let e = p.log_eval(u);
            val += w * e.log_value;
            mean += w * e.mean_degree;
            var += w * e.var_degree;
        }
        (val - k * u, mean - k, var)
    };

    // Bracket the derivative root.
    let (mut a, mut b) = (-1.0f64, 1.0f64);
    while eval(a).1 > 0.0 {
        b = a;
        a *= 2.0;
        if a < -1e6 {
            break;
        }
    }
    while eval(b).1 < 0.0 {
        a = b;
        b *= 2.0;
        if b > 1e6 {
            break;
        }
    }

    let mut u = 0.5 * (a + b);
    for _ in 0..MAX_ITERATIONS {
        let (_, grad, curv) = eval(u);
        if grad > 0.0 {
            b = u;
        } else {
            a = u;
        }
        let mut next = if curv > 0.0 { u - grad / curv } else { f64::NAN };
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        let step = (next - u).abs();
        u = next;
        if step < NEWTON_TOL || b - a < NEWTON_TOL {
            break;
        }
    }
    SaddlePoint {
        value: eval(u).0,
        log_x: u,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_plus_x_to_the_fourth() {
        let p = Polynomial::from_coefficients(&[1.0, 1.0]).unwrap();
        let s = saddle_min(&p, 4.0, 2.0);
        assert!((s.value - 16f64.ln()).abs() < 1e-12);
        assert!(s.log_x.abs() < 1e-9);
        // [x^2](1+x)^4 = 6
        assert!(s.value > 6f64.ln());
    }

    #[test]
    fn zero_k_with_unit_constant_term() {
        let p = Polynomial::from_coefficients(&[1.0, 3.0, 2.0]).unwrap();
        let s = saddle_min(&p, 2.5, 0.0);
        assert_eq!(s.value, 0.0);
        assert_eq!(s.log_x, f64::NEG_INFINITY);
    }

    #[test]
    fn k_below_minimum_degree_is_infeasible() {
        let p = Polynomial::from_coefficients(&[0.0, 0.0, 0.0, 4.0, 1.0]).unwrap();
        assert_eq!(saddle_min(&p, 1.0, 1.0).value, f64::NEG_INFINITY);
        assert_eq!(saddle_min(&p, 1.0, 5.0).value, f64::NEG_INFINITY);
        // on the boundaries the limits are the extreme coefficients
        assert!((saddle_min(&p, 1.0, 3.0).value - 4f64.ln()).abs() < 1e-15);
        assert!(saddle_min(&p, 1.0, 4.0).value.abs() < 1e-15);
    }

    #[test]
    fn zero_weight_terms_vanish() {
        let p = Polynomial::from_coefficients(&[1.0, 1.0]).unwrap();
        assert_eq!(saddle_min(&p, 0.0, 0.0).value, 0.0);
        assert_eq!(saddle_min(&p, 0.0, 0.5).value, f64::NEG_INFINITY);
    }

    #[test]
    fn mixed_terms_match_product_polynomial() {
        // (1+x)^2 (1+2x)^1 = 1 + 4x + 5x^2 + 2x^3
        let a = Polynomial::from_coefficients(&[1.0, 1.0]).unwrap();
        let b = Polynomial::from_coefficients(&[1.0, 2.0]).unwrap();
        let prod = Polynomial::from_coefficients(&[1.0, 4.0, 5.0, 2.0]).unwrap();
        for &k in &[0.3, 1.0, 1.7, 2.6] {
            let m = saddle_min_mixed(&[(2.0, &a), (1.0, &b)], k);
            let p = saddle_min(&prod, 1.0, k);
            assert!((m.value - p.value).abs() < 1e-12);
            assert!((m.log_x - p.log_x).abs() < 1e-8);
        }
    }
}
