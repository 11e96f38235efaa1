//! Polynomials with nonnegative coefficients, stored and evaluated in the log
//! domain so that binomial sums of degree in the thousands stay finite.

use super::entropy::ln_binomial;

/// Result of evaluating `F` at `x = e^u`.
#[derive(Clone, Copy, Debug)]
pub struct LogEval {
    /// `log F(e^u)`
    pub log_value: f64,
    /// `x F'(x) / F(x)`: mean degree under the weights `f_j x^j`.
    pub mean_degree: f64,
    /// Variance of the degree under the same weights.
    pub var_degree: f64,
}

/// A polynomial `Σ_j f_j x^j` with `f_j ≥ 0`.
///
/// Coefficients are held as `log f_j` (`-inf` for zero) for degrees
/// `min_degree..=max_degree`. When the coefficient sequence is log-concave
/// (all binomial bands are), evaluation only visits the terms around the peak.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    min_degree: usize,
    log_coeffs: Vec<f64>,
    log_concave: bool,
}

/// Terms further than this many nats below the peak are dropped.
const TERM_CUTOFF: f64 = 45.0;

impl Polynomial {
    /// Builds a polynomial from plain coefficients; index = degree.
    ///
    /// Returns `None` if all coefficients are zero or any is negative.
    pub fn from_coefficients(coeffs: &[f64]) -> Option<Self> {
        if coeffs.iter().any(|&c| !(c >= 0.0)) {
            return None;
        }
        let lo = coeffs.iter().position(|&c| c > 0.0)?;
        let hi = coeffs.iter().rposition(|&c| c > 0.0)?;
        let log_coeffs = coeffs[lo..=hi]
            .iter()
            .map(|&c| if c > 0.0 { c.ln() } else { f64::NEG_INFINITY })
            .collect();
        Some(Polynomial {
            min_degree: lo,
            log_coeffs,
            log_concave: false,
        })
    }

    /// `Σ_{j=lo}^{hi} C(n, j) x^j`.
    pub fn binomial_band(n: usize, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi <= n, "invalid binomial band {lo}..={hi} of {n}");
        Polynomial {
            min_degree: lo,
            log_coeffs: (lo..=hi)
                .map(|j| ln_binomial(n as u64, j as u64))
                .collect(),
            log_concave: true,
        }
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    pub fn max_degree(&self) -> usize {
        self.min_degree + self.log_coeffs.len() - 1
    }

    pub fn log_coefficient(&self, degree: usize) -> f64 {
        if degree < self.min_degree || degree > self.max_degree() {
            f64::NEG_INFINITY
        } else {
            self.log_coeffs[degree - self.min_degree]
        }
    }

    pub fn coefficient(&self, degree: usize) -> f64 {
        self.log_coefficient(degree).exp()
    }

    /// Dense coefficient list, index = degree.
    pub fn coefficients(&self) -> Vec<f64> {
        (0..=self.max_degree()).map(|j| self.coefficient(j)).collect()
    }

    /// Evaluates `log F(e^u)` with the degree mean and variance.
    pub fn log_eval(&self, u: f64) -> LogEval {
        let n = self.log_coeffs.len();
        let term = |idx: usize| self.log_coeffs[idx] + (self.min_degree + idx) as f64 * u;
        let (start, end) = if self.log_concave && n > 8 {
            // Peak of a log-concave sequence plus a linear term: binary search
            // on the sign of consecutive differences.
            let (mut a, mut b) = (0usize, n - 1);
            while a < b {
                let m = (a + b) / 2;
                if term(m + 1) > term(m) {
                    a = m + 1;
                } else {
                    b = m;
                }
            }
            let peak_val = term(a);
            let mut lo = a;
            while lo > 0 && term(lo - 1) > peak_val - TERM_CUTOFF {
                lo -= 1;
            }
            let mut hi = a;
            while hi + 1 < n && term(hi + 1) > peak_val - TERM_CUTOFF {
                hi += 1;
            }
            (lo, hi)
        } else {
            (0, n - 1)
        };
        let mut max = f64::NEG_INFINITY;
        for idx in start..=end {
            max = max.max(term(idx));
        }
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for idx in start..=end {
            let w = (term(idx) - max).exp();
            let deg = (self.min_degree + idx) as f64;
            s0 += w;
            s1 += w * deg;
            s2 += w * deg * deg;
        }
        let mean = s1 / s0;
        LogEval {
            log_value: max + s0.ln(),
            mean_degree: mean,
            var_degree: (s2 / s0 - mean * mean).max(0.0),
        }
    }
}

/// The variable-side generating polynomials `F_0..F_3` for degree `c` and
/// flip threshold `c1`:
///
/// * `F_0 = Σ_{j=c-c1+1}^{c} C(c,j) x^j`
/// * `F_1 = Σ_{j=0}^{c-c1} C(c,j) x^j`
/// * `F_2 = Σ_{j=c1}^{c} C(c,j) x^j`
/// * `F_3 = Σ_{j=0}^{c1-1} C(c,j) x^j`
pub fn poly_f(index: usize, c: usize, c1: usize) -> Polynomial {
    assert!(c1 >= 1 && c1 <= c, "flip threshold {c1} outside [1, {c}]");
    match index {
        0 => Polynomial::binomial_band(c, c - c1 + 1, c),
        1 => Polynomial::binomial_band(c, 0, c - c1),
        2 => Polynomial::binomial_band(c, c1, c),
        3 => Polynomial::binomial_band(c, 0, c1 - 1),
        _ => panic!("F polynomial index {index} out of range"),
    }
}

/// The check-side polynomials: `G_0 = Σ_{j=t+1}^{d} C(d,j) x^j` and
/// `G_1 = Σ_{j=0}^{t} C(d,j) x^j`.
pub fn poly_g(index: usize, d: usize, t: usize) -> Polynomial {
    assert!(t + 1 <= d, "radius {t} too large for blocklength {d}");
    match index {
        0 => Polynomial::binomial_band(d, t + 1, d),
        1 => Polynomial::binomial_band(d, 0, t),
        _ => panic!("G polynomial index {index} out of range"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rounded(p: &Polynomial) -> Vec<u64> {
        p.coefficients().iter().map(|c| c.round() as u64).collect()
    }

    #[test]
    fn defined_polynomials() {
        assert_eq!(rounded(&poly_f(0, 4, 2)), vec![0, 0, 0, 4, 1]);
        assert_eq!(rounded(&poly_g(1, 7, 1)), vec![1, 7]);
        assert_eq!(rounded(&poly_f(3, 3, 2)), vec![1, 3]);
        assert_eq!(rounded(&poly_f(1, 4, 3)), vec![1, 4]);
        assert_eq!(rounded(&poly_f(2, 4, 3)), vec![0, 0, 0, 4, 1]);
        assert_eq!(poly_g(0, 30, 3).min_degree(), 4);
        assert_eq!(poly_g(0, 30, 3).max_degree(), 30);
    }

    #[test]
    fn peak_evaluation_matches_full_sum() {
        let band = poly_g(0, 2047, 1);
        let mut dense = band.clone();
        dense.log_concave = false;
        for &u in &[-12.0, -6.5, -1.0, 0.0, 0.7, 3.0, 9.0] {
            let a = band.log_eval(u);
            let b = dense.log_eval(u);
            assert!((a.log_value - b.log_value).abs() < 1e-11 * b.log_value.abs().max(1.0));
            assert!((a.mean_degree - b.mean_degree).abs() < 1e-9 * b.mean_degree);
        }
    }

    #[test]
    fn evaluation_of_one_plus_x() {
        let p = Polynomial::from_coefficients(&[1.0, 1.0]).unwrap();
        let e = p.log_eval(0.0);
        assert!((e.log_value - 2f64.ln()).abs() < 1e-15);
        assert!((e.mean_degree - 0.5).abs() < 1e-15);
        assert!((e.var_degree - 0.25).abs() < 1e-15);
        assert!(Polynomial::from_coefficients(&[0.0, 0.0]).is_none());
    }
}
