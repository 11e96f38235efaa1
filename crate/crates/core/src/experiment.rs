//! Monte-Carlo decoding experiments and graph expurgation.
//!
//! Every trial transmits the all-zero codeword. Trial `k` draws its own seed
//! from the ChaCha20 stream `k` of the master seed, so results do not depend
//! on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::codes::{CodeError, ComponentCode};
use crate::decoder::{Decoder, DecoderConfig, DecoderError};
use crate::ensemble::{EnsembleError, EnsembleParams, TannerGraph};
use crate::field::Elem;
use crate::partition::{expurgation_scan, PartitionError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("error weight {weight} exceeds N = {n}")]
    WeightTooLarge { weight: usize, n: usize },
    #[error("pattern list is empty")]
    NoPatterns,
    #[error("pattern {index}: {reason}")]
    BadPattern { index: usize, reason: String },
    #[error("graph ({n}, {c}, {d}) does not match the ensemble parameters")]
    GraphMismatch { n: usize, c: usize, d: usize },
}

/// A fixed error pattern: symbol `values[k]` added at `positions[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorPattern {
    pub positions: Vec<usize>,
    pub values: Vec<Elem>,
}

impl ErrorPattern {
    pub fn weight(&self) -> usize {
        self.positions.len()
    }
}

/// One line: the weight `w`, then `w` positions, then `w` values.
impl FromStr for ErrorPattern {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, String> {
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|tok| tok.parse().map_err(|_| format!("not a number: {tok:?}")))
            .collect::<Result<_, _>>()?;
        let (&w, rest) = nums.split_first().ok_or("empty line")?;
        let w = w as usize;
        if rest.len() != 2 * w {
            return Err(format!("weight {w} needs {} more numbers, found {}", 2 * w, rest.len()));
        }
        Ok(ErrorPattern {
            positions: rest[..w].iter().map(|&p| p as usize).collect(),
            values: rest[w..].iter().map(|&v| v as Elem).collect(),
        })
    }
}

impl fmt::Display for ErrorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.weight())?;
        for p in &self.positions {
            write!(f, " {p}")?;
        }
        for v in &self.values {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

/// Parses a pattern file; blank lines and lines starting with `#` are skipped.
pub fn parse_patterns(text: &str) -> Result<Vec<ErrorPattern>, ExperimentError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.parse()
                .map_err(|reason| ExperimentError::BadPattern { index: i + 1, reason })
        })
        .collect()
}

#[derive(Clone, Debug)]
pub enum ErrorModel {
    /// `weight` distinct uniform positions, each with a uniform nonzero value.
    Random { weight: usize },
    /// Trial `k` uses pattern `k mod len`.
    Patterns(Vec<ErrorPattern>),
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub params: EnsembleParams,
    pub trials: usize,
    pub master_seed: u64,
    pub model: ErrorModel,
    pub max_iterations: usize,
    /// Decode on this graph in every trial instead of sampling one per trial.
    pub graph: Option<TannerGraph>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub weight: usize,
    pub iterations: usize,
    pub success: bool,
    /// Nonzero symbols left after decoding.
    pub residual: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub wilson_lower: f64,
    pub wilson_upper: f64,
    pub mean_iterations: f64,
}

/// Seed of trial `index`: the first word of ChaCha20 stream `index` keyed by
/// `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}

/// Wilson score interval for `successes` out of `trials` at the given
/// two-sided confidence level.
pub fn wilson_interval(successes: usize, trials: usize, confidence: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn random_pattern(rng: &mut ChaCha20Rng, n: usize, weight: usize, q: u32) -> ErrorPattern {
    let positions = index::sample(rng, n, weight).into_vec();
    let values = positions.iter().map(|_| rng.random_range(1..q)).collect();
    ErrorPattern { positions, values }
}

fn check_pattern(p: &ErrorPattern, index: usize, n: usize, q: u32) -> Result<(), ExperimentError> {
    let bad = |reason: String| Err(ExperimentError::BadPattern { index, reason });
    if p.positions.len() != p.values.len() {
        return bad("positions and values differ in length".into());
    }
    let mut seen = p.positions.clone();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return bad("repeated position".into());
    }
    if let Some(&pos) = seen.last().filter(|&&pos| pos >= n) {
        return bad(format!("position {pos} out of range for N = {n}"));
    }
    if let Some(v) = p.values.iter().find(|&&v| v == 0 || v >= q) {
        return bad(format!("value {v} is not a nonzero element of GF({q})"));
    }
    Ok(())
}

pub fn simulate(
    config: &SimulationConfig,
) -> Result<(Vec<TrialRecord>, SimulationSummary), ExperimentError> {
    let params = &config.params;
    params.validate()?;
    let code = params.code.build()?;
    let (n, q) = (params.n, params.q());
    match &config.model {
        ErrorModel::Random { weight } if *weight > n => {
            return Err(ExperimentError::WeightTooLarge { weight: *weight, n });
        }
        ErrorModel::Patterns(list) if list.is_empty() => return Err(ExperimentError::NoPatterns),
        ErrorModel::Patterns(list) => {
            for (i, p) in list.iter().enumerate() {
                check_pattern(p, i + 1, n, q)?;
            }
        }
        _ => {}
    }
    if let Some(g) = &config.graph {
        if (g.num_variables(), g.var_degree(), g.check_degree()) != (n, params.c, params.d) {
            return Err(ExperimentError::GraphMismatch {
                n: g.num_variables(),
                c: g.var_degree(),
                d: g.check_degree(),
            });
        }
    }

    let records = (0..config.trials)
        .into_par_iter()
        .map(|k| run_trial(config, &code, k))
        .collect::<Result<Vec<_>, _>>()?;

    let successes = records.iter().filter(|r| r.success).count();
    let (wilson_lower, wilson_upper) = wilson_interval(successes, records.len(), 0.95);
    let summary = SimulationSummary {
        trials: records.len(),
        successes,
        success_rate: if records.is_empty() {
            0.0
        } else {
            successes as f64 / records.len() as f64
        },
        wilson_lower,
        wilson_upper,
        mean_iterations: records.iter().map(|r| r.iterations as f64).sum::<f64>()
            / records.len().max(1) as f64,
    };
    Ok((records, summary))
}

fn run_trial(
    config: &SimulationConfig,
    code: &ComponentCode,
    k: usize,
) -> Result<TrialRecord, ExperimentError> {
    let params = &config.params;
    let seed = trial_seed(config.master_seed, k as u64);
    let sampled;
    let graph = match &config.graph {
        Some(g) => g,
        None => {
            sampled = TannerGraph::sample_params(params, seed)?;
            &sampled
        }
    };
    let pattern = match &config.model {
        ErrorModel::Random { weight } => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(1);
            random_pattern(&mut rng, params.n, *weight, params.q())
        }
        ErrorModel::Patterns(list) => list[k % list.len()].clone(),
    };
    let mut received = vec![0; params.n];
    for (&p, &v) in pattern.positions.iter().zip(&pattern.values) {
        received[p] = v;
    }
    let decoder = Decoder::new(
        graph,
        code,
        DecoderConfig {
            c1: params.c1,
            max_iterations: config.max_iterations,
        },
    )?;
    let result = decoder.decode(&received)?;
    let residual = result.word.iter().filter(|&&x| x != 0).count();
    Ok(TrialRecord {
        trial: k,
        seed,
        weight: pattern.weight(),
        iterations: result.iterations,
        success: residual == 0,
        residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpurgationOutcome {
    /// Seed of the first clean graph, if one was found.
    pub accepted_seed: Option<u64>,
    /// Seeds tried, starting from the requested one.
    pub attempts: usize,
    /// Possibly bad sets of the last graph examined.
    pub bad_sets: Vec<Vec<usize>>,
}

/// Scans the graph sampled from `seed`; with `max_attempts > 1`, keeps
/// incrementing the seed until a graph without possibly bad sets of size at
/// most `b_max` turns up.
pub fn expurgate(
    params: &EnsembleParams,
    seed: u64,
    b_max: usize,
    budget: u64,
    max_attempts: usize,
) -> Result<ExpurgationOutcome, ExperimentError> {
    params.validate()?;
    let t = params.t();
    let mut bad_sets = Vec::new();
    for attempt in 0..max_attempts.max(1) {
        let s = seed.wrapping_add(attempt as u64);
        let graph = TannerGraph::sample_params(params, s)?;
        bad_sets = expurgation_scan(&graph, b_max, params.c1, t, budget)?;
        if bad_sets.is_empty() {
            return Ok(ExpurgationOutcome {
                accepted_seed: Some(s),
                attempts: attempt + 1,
                bad_sets,
            });
        }
    }
    Ok(ExpurgationOutcome {
        accepted_seed: None,
        attempts: max_attempts.max(1),
        bad_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::CodeSpec;

    #[test]
    fn pattern_line_round_trip() {
        let p: ErrorPattern = "2 5 9 1 3".parse().unwrap();
        assert_eq!(p.positions, vec![5, 9]);
        assert_eq!(p.values, vec![1, 3]);
        assert_eq!(p.to_string(), "2 5 9 1 3");
        assert!("2 5 9 1".parse::<ErrorPattern>().is_err());
        assert!("x".parse::<ErrorPattern>().is_err());
        let list = parse_patterns("# header\n\n1 0 1\n0\n").unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list[1].weight(), 0);
    }

    #[test]
    fn wilson_interval_known_value() {
        // 8 of 10 at 95%: (0.4902, 0.9433)
        let (lo, hi) = wilson_interval(8, 10, 0.95);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4);
        let (lo, hi) = wilson_interval(0, 20, 0.95);
        assert!(lo.abs() < 1e-12);
        assert!(hi > 0.0 && hi < 0.2);
    }

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let seeds: Vec<u64> = (0..100).map(|k| trial_seed(7, k)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);
        assert_eq!(seeds[3], trial_seed(7, 3));
        assert_ne!(trial_seed(7, 3), trial_seed(8, 3));
    }

    #[test]
    fn weight_zero_always_succeeds_in_one_iteration() {
        let params = EnsembleParams::new(70, 3, CodeSpec::Hamming { m: 3 }, 2).unwrap();
        let config = SimulationConfig {
            params,
            trials: 5,
            master_seed: 1,
            model: ErrorModel::Random { weight: 0 },
            max_iterations: 100,
            graph: None,
        };
        let (records, summary) = simulate(&config).unwrap();
        assert!(records.iter().all(|r| r.success && r.iterations == 1));
        assert_eq!(summary.successes, 5);
    }

    #[test]
    fn bad_patterns_are_rejected() {
        let params = EnsembleParams::new(70, 3, CodeSpec::Hamming { m: 3 }, 2).unwrap();
        let mut config = SimulationConfig {
            params,
            trials: 1,
            master_seed: 1,
            model: ErrorModel::Patterns(vec!["1 70 1".parse().unwrap()]),
            max_iterations: 100,
            graph: None,
        };
        assert!(matches!(simulate(&config), Err(ExperimentError::BadPattern { .. })));
        config.model = ErrorModel::Patterns(vec!["1 3 2".parse().unwrap()]);
        assert!(matches!(simulate(&config), Err(ExperimentError::BadPattern { .. })));
        config.model = ErrorModel::Random { weight: 71 };
        assert!(matches!(simulate(&config), Err(ExperimentError::WeightTooLarge { .. })));
    }
}
