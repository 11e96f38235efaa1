//! The Gilbert-Varshamov relative distance, for comparison with the decoding
//! radii.

use super::BoundsError;

const GV_TOL: f64 = 1e-6;

/// `q`-ary entropy `δ log_q(q-1) - δ log_q δ - (1-δ) log_q(1-δ)`.
pub fn entropy_q(delta: f64, q: u32) -> f64 {
    let q = q as f64;
    let xlx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    (delta * (q - 1.0).ln() - xlx(delta) - xlx(1.0 - delta)) / q.ln()
}

/// The `δ ∈ (0, 1 - 1/q)` with `R = 1 - h_q(δ)`, by bisection.
pub fn gv_distance(rate: f64, q: u32) -> Result<f64, BoundsError> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(BoundsError::RateOutOfRange(rate));
    }
    if q < 2 {
        return Err(BoundsError::InvalidConfig(format!("alphabet size q = {q} below 2")));
    }
    let target = 1.0 - rate;
    let (mut lo, mut hi) = (0.0, 1.0 - 1.0 / q as f64);
    while hi - lo > GV_TOL {
        let mid = 0.5 * (lo + hi);
        if entropy_q(mid, q) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_half_rate() {
        assert!((gv_distance(0.5, 2).unwrap() - 0.110028).abs() < 2e-6);
    }

    #[test]
    fn entropy_peaks_at_one_minus_inverse_q() {
        for q in [2, 31, 41] {
            let top = 1.0 - 1.0 / q as f64;
            assert!((entropy_q(top, q) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(gv_distance(0.0, 2).is_err());
        assert!(gv_distance(1.0, 2).is_err());
        assert!(gv_distance(0.5, 1).is_err());
    }
}
