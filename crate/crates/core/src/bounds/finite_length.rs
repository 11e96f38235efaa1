//! Finite-length union bound on the probability that a graph drawn from the
//! ensemble has a possibly bad partition with exactly `i` corrupt variables.
//!
//! For every integer tuple `(g, dl, ph, om)` compatible with a possibly bad
//! partition of size `i`, the term is
//! `η · exp(ρ) / C(Nc; om, ic - om, ph·d - om)`, where `η` counts the ways to
//! choose the variable and check subsets, `ρ` is the saddle-point bound on
//! the socket markings, and the multinomial accounts for the matchings.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::entropy::{
    log_multinomial, log_multinomial_lower_stirling, log_multinomial_upper_h,
    log_multinomial_upper_stirling,
};
use super::saddle::{saddle_min, saddle_min_mixed};
use super::{BoundConfig, BoundsError};

/// Default pruning depth below the running maximum, in nats.
pub const DEFAULT_PRUNE_NATS: f64 = 40.0;

/// How the matching multinomial in the denominator is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Denominator {
    /// Log-gamma, exact.
    Exact,
    /// Stirling lower bound on the multinomial, giving a looser closed form.
    StirlingBound,
}

/// How the subset-choice count `η` is bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaBound {
    /// Stirling-refined bound applied to each factor separately.
    Stirling,
    /// Plain `e^{n h}` bound.
    Entropy,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteLengthOptions {
    pub denominator: Denominator,
    pub eta: EtaBound,
    pub prune_nats: f64,
}

impl Default for FiniteLengthOptions {
    fn default() -> Self {
        FiniteLengthOptions {
            denominator: Denominator::Exact,
            eta: EtaBound::Stirling,
            prune_nats: DEFAULT_PRUNE_NATS,
        }
    }
}

/// Bounds `p̃_e(i)` for `i = 1..=i_max` and their running sums.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteLengthCurve {
    pub n: usize,
    pub options: FiniteLengthOptions,
    /// `log p̃_e(i)` at index `i - 1`; `-inf` when no tuple is feasible.
    pub ln_pe: Vec<f64>,
    pub pe: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl FiniteLengthCurve {
    /// Number of leading entries whose cumulative bound is below one.
    pub fn useful_len(&self) -> usize {
        self.cumulative.iter().take_while(|&&s| s < 1.0).count()
    }
}

/// Running `log Σ exp` with its largest term.
#[derive(Clone, Copy, Debug)]
struct LogSum {
    max: f64,
    scaled: f64,
}

impl LogSum {
    const EMPTY: LogSum = LogSum {
        max: f64::NEG_INFINITY,
        scaled: 0.0,
    };

    fn add(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x > self.max {
            self.scaled = self.scaled * (self.max - x).exp() + 1.0;
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// Tracks a sequence of log terms and says when the rest can be dropped:
/// after the terms have started to decrease and fallen `depth` below the
/// largest one seen.
struct Pruner {
    depth: f64,
    best: f64,
    prev: f64,
}

impl Pruner {
    fn new(depth: f64) -> Self {
        Pruner {
            depth,
            best: f64::NEG_INFINITY,
            prev: f64::NEG_INFINITY,
        }
    }

    fn exhausted(&mut self, x: f64) -> bool {
        let done = x.is_finite() && x < self.prev && x < self.best - self.depth;
        self.best = self.best.max(x);
        self.prev = x;
        done
    }
}

pub fn finite_length_bound(
    n: usize,
    i_max: usize,
    cfg: &BoundConfig,
    options: FiniteLengthOptions,
) -> Result<FiniteLengthCurve, BoundsError> {
    let (c, d) = (cfg.c, cfg.d);
    if n == 0 || (n * c) % d != 0 {
        return Err(BoundsError::InfeasibleBlocklength {
            n: n as u64,
            reason: format!("N*c = {} is not a positive multiple of d = {d}", n * c),
        });
    }
    if i_max > n {
        return Err(BoundsError::InfeasibleBlocklength {
            n: n as u64,
            reason: format!("i_max = {i_max} exceeds N"),
        });
    }
    let ln_pe: Vec<f64> = (1..=i_max)
        .into_par_iter()
        .map(|i| ln_pe_at(n, i, cfg, &options))
        .collect();
    let pe: Vec<f64> = ln_pe.iter().map(|x| x.exp()).collect();
    let cumulative = pe
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    Ok(FiniteLengthCurve {
        n,
        options,
        ln_pe,
        pe,
        cumulative,
    })
}

fn ln_eta(eta: EtaBound, n: u64, parts: &[u64]) -> f64 {
    match eta {
        EtaBound::Stirling => log_multinomial_upper_stirling(n, parts),
        EtaBound::Entropy => log_multinomial_upper_h(n, parts),
    }
    .expect("parts fit inside n")
}

/// `log p̃_e(i)`.
fn ln_pe_at(n: usize, i: usize, cfg: &BoundConfig, opt: &FiniteLengthOptions) -> f64 {
    let (c, d, t, c1) = (cfg.c, cfg.d, cfg.t, cfg.c1);
    let sockets = n * c;
    let checks = sockets / d;
    let a = i;
    let ac = a * c;
    let [f0, f1, f2, f3] = &cfg.f;
    let [g0, g1] = &cfg.g;

    let mut total = LogSum::EMPTY;
    let mut ph_pruner = Pruner::new(opt.prune_nats);
    for ph in 1..=checks.min(ac / (t + 1)) {
        let ln_checks = ln_eta(opt.eta, checks as u64, &[ph as u64]);
        let om_lo = ((t + 1) * ph).max((ac + ph * d).saturating_sub(sockets));
        let om_hi = ac.min(ph * d);
        let mut ph_sum = LogSum::EMPTY;
        for om in om_lo..=om_hi {
            let x = ph * d - om;
            let u = saddle_min(g0, ph as f64, om as f64).value
                + saddle_min(g1, (checks - ph) as f64, (ac - om) as f64).value;
            if u == f64::NEG_INFINITY {
                continue;
            }
            let parts = [om as u64, (ac - om) as u64, x as u64];
            let den = match opt.denominator {
                Denominator::Exact => log_multinomial(sockets as u64, &parts),
                Denominator::StirlingBound => log_multinomial_lower_stirling(sockets as u64, &parts),
            }
            .expect("parts fit inside Nc");
            let head = ln_checks + u - den;

            for g in 0..=a.min(om / (c + 1 - c1)) {
                let t1 = saddle_min_mixed(&[(g as f64, f0), ((a - g) as f64, f1)], om as f64).value;
                if t1 == f64::NEG_INFINITY {
                    continue;
                }
                let mut dl_pruner = Pruner::new(opt.prune_nats);
                for dl in (a - g)..=(n - a).min(x / c1) {
                    let t2 = saddle_min_mixed(
                        &[(dl as f64, f2), ((n - a - dl) as f64, f3)],
                        x as f64,
                    )
                    .value;
                    let eta = ln_eta(opt.eta, n as u64, &[g as u64, (a - g) as u64, dl as u64]);
                    let term = head + t1 + t2 + eta;
                    ph_sum.add(term);
                    if dl_pruner.exhausted(term) {
                        break;
                    }
                }
            }
        }
        let value = ph_sum.value();
        total.add(value);
        if ph_pruner.exhausted(value) {
            break;
        }
    }
    total.value()
}
