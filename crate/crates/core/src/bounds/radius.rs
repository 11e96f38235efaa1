//! Correction radii: `α₀`, the smallest positive root of `f`, and `α_R`, the
//! largest `α` with `f̃(α, α₀) ≤ 0`.

use std::collections::HashMap;

use serde::Serialize;

use super::optimize::f_alpha;
use super::psi::{condition_check, BoundConfig, Mode, Tolerances};
use super::BoundsError;

/// A root located to within `[lower, upper]`; `value` is the bracket midpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RootBracket {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl RootBracket {
    fn from_bracket(lower: f64, upper: f64) -> Self {
        RootBracket {
            value: 0.5 * (lower + upper),
            lower,
            upper,
        }
    }
}

/// Narrows `[neg, pos]` (sign given by `is_neg`) to relative width `rel_tol`.
fn bisect(mut neg: f64, mut pos: f64, rel_tol: f64, is_neg: impl Fn(f64) -> bool) -> (f64, f64) {
    while (pos - neg).abs() > rel_tol * neg.min(pos) {
        let mid = (neg * pos).sqrt();
        if is_neg(mid) {
            neg = mid;
        } else {
            pos = mid;
        }
    }
    (neg, pos)
}

/// Worst-case radius `α₀`: geometric scan upward from `alpha_min` for the
/// first sign change of `f`, then bisection.
pub fn alpha0(cfg: &BoundConfig) -> Result<RootBracket, BoundsError> {
    cfg.check_condition()?;
    let tol = &cfg.tolerances;
    let negative = |a: f64| f_alpha(a, cfg, Mode::WorstCase).value < 0.0;

    let mut a = tol.alpha_min;
    if !negative(a) {
        return Err(BoundsError::NoRoot(a));
    }
    let b = loop {
        let b = a * tol.scan_factor;
        if b > tol.alpha_max {
            return Err(BoundsError::NoRoot(tol.alpha_max));
        }
        if !negative(b) {
            break b;
        }
        a = b;
    };
    let (lower, upper) = bisect(a, b, tol.root_rel_tol, negative);
    Ok(RootBracket::from_bracket(lower, upper))
}

/// Random-error radius `α_R` given `α₀`: downward scan from `alpha_max` for
/// the largest `α` with `f̃(α, α₀) ≤ 0`, then bisection.
///
/// `f̃` never exceeds zero (up to rounding), since its maximum is a
/// log-probability exponent; it is pinned at zero once the typical first
/// iteration leaves at least `α₀` errors. "Nonpositive" is therefore taken
/// as strictly below `-zero_tol` with the constraint `γ + δ ≥ α₀` active at
/// the maximizer; an inactive constraint means the maximizer is the typical
/// point, whose exponent is zero.
pub fn alpha_r(cfg: &BoundConfig, alpha0: f64) -> RootBracket {
    let tol = &cfg.tolerances;
    let mode = Mode::Random { nu: alpha0 };
    let nonpositive = |a: f64| {
        let f = f_alpha(a, cfg, mode);
        match f.witness {
            None => true,
            Some(w) => f.value < -tol.zero_tol && w.gamma + w.delta <= alpha0 * (1.0 + 1e-6),
        }
    };

    let mut b = tol.alpha_max;
    if nonpositive(b) {
        return RootBracket {
            value: b,
            lower: b,
            upper: b,
        };
    }
    let a = loop {
        let a = b / tol.scan_factor;
        if a <= alpha0 {
            // f̃(α₀, α₀) ≤ f(α₀) = 0
            let (lower, upper) = bisect(alpha0, b, tol.root_rel_tol, nonpositive);
            return RootBracket::from_bracket(lower, upper);
        }
        if nonpositive(a) {
            break a;
        }
        b = a;
    };
    let (lower, upper) = bisect(a, b, tol.root_rel_tol, nonpositive);
    RootBracket::from_bracket(lower, upper)
}

/// Flip threshold chosen for a bound computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum C1Choice {
    /// Supplied by the caller.
    Given,
    /// Chosen to maximize `α₀` over the admissible thresholds.
    MaximizedAlpha0,
}

/// `α₀` for the given flip threshold, or, when `c1` is `None`, for the
/// admissible threshold maximizing `α₀`.
///
/// The maximization assumes `α₀` is unimodal in `c1` (thresholds whose `f`
/// has no root count as zero) and runs an integer golden-section search.
/// `nonbinary` restricts thresholds to `c1 > c/2`.
pub fn best_alpha0(
    c: usize,
    d: usize,
    t: usize,
    c1: Option<usize>,
    nonbinary: bool,
    tolerances: &Tolerances,
) -> Result<(usize, C1Choice, RootBracket), BoundsError> {
    let run = |c1: usize| -> Result<RootBracket, BoundsError> {
        let cfg = BoundConfig::new(c, d, t, c1)?.with_tolerances(tolerances.clone());
        alpha0(&cfg)
    };
    if let Some(c1) = c1 {
        if nonbinary && 2 * c1 <= c {
            return Err(BoundsError::InvalidConfig(format!(
                "non-binary codes need c1 > c/2, got c1 = {c1}, c = {c}"
            )));
        }
        return run(c1).map(|r| (c1, C1Choice::Given, r));
    }
    let candidates: Vec<usize> = (2..=c)
        .filter(|&c1| condition_check(c, c1, t) && (!nonbinary || 2 * c1 > c))
        .collect();
    if candidates.is_empty() {
        return Err(BoundsError::ConditionViolated(format!(
            "no flip threshold satisfies c1 >= 2 and (c - c1 + 1) t / (t + 1) > 1 for c = {c}, t = {t}"
        )));
    }

    let mut memo: HashMap<usize, Result<RootBracket, BoundsError>> = HashMap::new();
    let mut score = |i: usize| -> f64 {
        let c1 = candidates[i];
        match memo.entry(c1).or_insert_with(|| run(c1)) {
            Ok(r) => r.value,
            Err(_) => 0.0,
        }
    };
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while hi - lo > 2 {
        let span = (hi - lo) as f64;
        let m1 = lo + (span * 0.381_966).round() as usize;
        let m2 = (hi - (span * 0.381_966).round() as usize).max(m1 + 1);
        if score(m1) >= score(m2) {
            hi = m2 - 1;
        } else {
            lo = m1 + 1;
        }
    }
    let best = (lo..=hi)
        .max_by(|&x, &y| score(x).total_cmp(&score(y)).then(y.cmp(&x)))
        .expect("nonempty range");
    let c1 = candidates[best];
    // A single candidate is never scored by the search.
    match memo.remove(&c1).unwrap_or_else(|| run(c1)) {
        Ok(r) => Ok((c1, C1Choice::MaximizedAlpha0, r)),
        Err(e) => Err(e),
    }
}
