//! Entropy function and bounds on multinomial coefficients.
//!
//! All logarithms are natural. A multinomial `C(n; n_1, ..., n_i)` always has an
//! implicit last part `n_{i+1} = n - sum(n_j)`.

use statrs::function::gamma::ln_gamma;

use super::BoundsError;

const SUM_TOLERANCE: f64 = 1e-12;

/// `-x log x` with the convention `0 log 0 = 0`.
#[inline]
pub(crate) fn xlogx_neg(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

/// `h(τ_1, ..., τ_i) = -Σ τ_j log τ_j - (1 - Στ_j) log(1 - Στ_j)`.
pub fn entropy_h(tau: &[f64]) -> Result<f64, BoundsError> {
    let mut sum = 0.0;
    for &x in tau {
        if !(x >= 0.0) {
            return Err(BoundsError::InvalidEntropyArgument(format!(
                "component {x} is negative"
            )));
        }
        sum += x;
    }
    if sum > 1.0 + SUM_TOLERANCE {
        return Err(BoundsError::InvalidEntropyArgument(format!(
            "components sum to {sum} > 1"
        )));
    }
    Ok(entropy_unchecked(tau))
}

/// Entropy without argument validation. Slightly negative inputs (rounding
/// noise) are treated as zero.
pub(crate) fn entropy_unchecked(tau: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut acc = 0.0;
    for &x in tau {
        sum += x;
        acc += xlogx_neg(x);
    }
    acc + xlogx_neg(1.0 - sum)
}

/// `log n!` through the log-gamma function.
#[inline]
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// `log C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Nonzero parts of a multinomial including the implicit remainder.
fn full_parts(n: u64, parts: &[u64]) -> Result<Vec<u64>, BoundsError> {
    let sum: u64 = parts.iter().sum();
    if sum > n {
        return Err(BoundsError::InvalidMultinomial { n, sum });
    }
    let mut all: Vec<u64> = parts.iter().copied().filter(|&p| p > 0).collect();
    if n - sum > 0 {
        all.push(n - sum);
    }
    Ok(all)
}

/// Exact `log C(n; parts)`.
pub fn log_multinomial(n: u64, parts: &[u64]) -> Result<f64, BoundsError> {
    let all = full_parts(n, parts)?;
    Ok(ln_factorial(n) - all.iter().map(|&p| ln_factorial(p)).sum::<f64>())
}

fn entropy_term(n: u64, all: &[u64]) -> f64 {
    let nf = n as f64;
    all.iter().map(|&p| xlogx_neg(p as f64 / nf)).sum::<f64>() * nf
}

/// `n h(τ)`, the plain entropy upper bound on `log C(n; parts)`.
pub fn log_multinomial_upper_h(n: u64, parts: &[u64]) -> Result<f64, BoundsError> {
    let all = full_parts(n, parts)?;
    Ok(entropy_term(n, &all))
}

/// Stirling-refined upper bound on `log C(n; parts)`. Zero parts are removed
/// first; a multinomial with a single nonzero part equals one.
pub fn log_multinomial_upper_stirling(n: u64, parts: &[u64]) -> Result<f64, BoundsError> {
    let all = full_parts(n, parts)?;
    if all.len() <= 1 {
        return Ok(0.0);
    }
    let i = (all.len() - 1) as f64;
    let ln_prod: f64 = all.iter().map(|&p| (p as f64).ln()).sum();
    Ok(-0.5 * i * std::f64::consts::TAU.ln()
        + 1.0 / 12.0
        + 0.5 * ((n as f64).ln() - ln_prod)
        + entropy_term(n, &all))
}

/// `log C_0` for a multinomial with `i` explicit parts:
/// `C_0 = (2π)^{-i/2} e^{-(i+1)/12}`.
pub fn ln_stirling_c0(i: usize) -> f64 {
    let i = i as f64;
    -0.5 * i * std::f64::consts::TAU.ln() - (i + 1.0) / 12.0
}

/// Stirling lower bound `C_0 e^{n h} / sqrt(n_1 ... n_i)` on `log C(n; parts)`.
pub fn log_multinomial_lower_stirling(n: u64, parts: &[u64]) -> Result<f64, BoundsError> {
    let all = full_parts(n, parts)?;
    if all.len() <= 1 {
        return Ok(0.0);
    }
    let i = all.len() - 1;
    // The last nonzero part plays the role of the remainder.
    let ln_prod: f64 = all[..i].iter().map(|&p| (p as f64).ln()).sum();
    Ok(ln_stirling_c0(i) - 0.5 * ln_prod + entropy_term(n, &all))
}
