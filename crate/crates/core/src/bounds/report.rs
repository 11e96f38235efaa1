//! Bundled results of a bound computation, ready for JSON export.

use std::time::Instant;

use serde::Serialize;

use super::finite_length::{finite_length_bound, FiniteLengthCurve, FiniteLengthOptions};
use super::optimize::f_alpha;
use super::psi::{BoundConfig, FractionPoint, Mode, Tolerances};
use super::radius::{alpha_r, best_alpha0, C1Choice, RootBracket};
use super::BoundsError;

/// The maximizer of `ψ` (worst case) or `ψ̃` (random) at one `α`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Witness {
    pub alpha: f64,
    pub mode: Mode,
    pub value: f64,
    pub point: Option<FractionPoint>,
}

impl Witness {
    pub fn at(alpha: f64, cfg: &BoundConfig, mode: Mode) -> Self {
        let f = f_alpha(alpha, cfg, mode);
        Witness {
            alpha,
            mode,
            value: f.value,
            point: f.witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub crate_version: &'static str,
    pub tolerances: Tolerances,
    pub wall_time_secs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub c: usize,
    pub d: usize,
    pub t: usize,
    pub c1: usize,
    pub c1_policy: C1Choice,
    pub alpha0: RootBracket,
    pub alpha_r: RootBracket,
    /// Worst-case maximizers at both ends of the `α₀` bracket, then
    /// random-error maximizers at both ends of the `α_R` bracket.
    pub witnesses: Vec<Witness>,
    pub finite_length: Option<FiniteLengthCurve>,
    pub provenance: Provenance,
}

/// Finite-length request attached to a report.
#[derive(Clone, Copy, Debug)]
pub struct FiniteLengthRequest {
    pub n: usize,
    pub i_max: usize,
    pub options: FiniteLengthOptions,
}

/// Computes `α₀` (for `c1`, or for the best admissible threshold when `c1`
/// is `None`), `α_R`, their witnesses and optionally a finite-length curve.
pub fn bound_report(
    c: usize,
    d: usize,
    t: usize,
    c1: Option<usize>,
    nonbinary: bool,
    tolerances: &Tolerances,
    finite: Option<FiniteLengthRequest>,
) -> Result<BoundReport, BoundsError> {
    let start = Instant::now();
    let (c1, c1_policy, a0) = best_alpha0(c, d, t, c1, nonbinary, tolerances)?;
    let cfg = BoundConfig::new(c, d, t, c1)?.with_tolerances(tolerances.clone());
    let ar = alpha_r(&cfg, a0.value);
    let random = Mode::Random { nu: a0.value };
    let witnesses = vec![
        Witness::at(a0.lower, &cfg, Mode::WorstCase),
        Witness::at(a0.upper, &cfg, Mode::WorstCase),
        Witness::at(ar.lower, &cfg, random),
        Witness::at(ar.upper, &cfg, random),
    ];
    let finite_length = finite
        .map(|req| finite_length_bound(req.n, req.i_max, &cfg, req.options))
        .transpose()?;
    Ok(BoundReport {
        c,
        d,
        t,
        c1,
        c1_policy,
        alpha0: a0,
        alpha_r: ar,
        witnesses,
        finite_length,
        provenance: Provenance {
            crate_version: env!("CARGO_PKG_VERSION"),
            tolerances: tolerances.clone(),
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
    })
}

/// `(α, f(α))` on `points` geometrically spaced values in `[lo, hi]`.
pub fn f_sweep(cfg: &BoundConfig, lo: f64, hi: f64, points: usize, mode: Mode) -> Vec<(f64, f64)> {
    assert!(lo > 0.0 && hi >= lo && points > 0, "bad sweep range");
    let ratio = if points > 1 { (hi / lo).powf(1.0 / (points - 1) as f64) } else { 1.0 };
    (0..points)
        .map(|k| {
            let alpha = if k + 1 == points { hi } else { lo * ratio.powi(k as i32) };
            (alpha, f_alpha(alpha, cfg, mode).value)
        })
        .collect()
}
