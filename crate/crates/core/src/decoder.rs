//! Parallel bit-flipping decoder with bounded-distance decoding at the checks.
//!
//! In every iteration each check runs its component decoder on the symbols it
//! sees. Each change it proposes is one vote for the variable on that socket,
//! so a variable with parallel edges into a check can collect several votes
//! from it. A variable moves to a value once at least `c1` votes propose that
//! value; all moves of an iteration are applied together.

use serde::Serialize;
use thiserror::Error;

use crate::codes::ComponentCode;
use crate::ensemble::TannerGraph;
use crate::field::Elem;

pub const DEFAULT_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecoderError {
    #[error("code blocklength {code} does not match check degree {graph}")]
    BlocklengthMismatch { code: usize, graph: usize },
    #[error("word has length {got}, graph has {expected} variables")]
    WrongLength { expected: usize, got: usize },
    #[error("flip threshold c1 = {c1} outside [1, {c}]")]
    BadThreshold { c1: usize, c: usize },
    #[error("non-binary decoding needs c1 > c/2, got c1 = {c1}, c = {c}")]
    NonBinaryThreshold { c1: usize, c: usize },
    #[error("symbol {0} is not a field element")]
    SymbolOutOfField(Elem),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DecoderConfig {
    pub c1: usize,
    pub max_iterations: usize,
}

impl DecoderConfig {
    pub fn new(c1: usize) -> Self {
        DecoderConfig {
            c1,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    /// An iteration changed nothing, or every check is satisfied.
    Fixpoint,
    IterationCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecodeResult {
    pub word: Vec<Elem>,
    /// Iterations run, counting the last one even when it changed nothing.
    pub iterations: usize,
    pub termination: Termination,
    /// Number of positions differing from the reference, before the first
    /// iteration and after each one.
    pub corrupt_trace: Option<Vec<usize>>,
}

impl DecodeResult {
    pub fn is_codeword_reached(&self, reference: &[Elem]) -> bool {
        self.word == reference
    }
}

#[derive(Clone, Debug)]
enum CheckState {
    Satisfied,
    Failed,
    /// `(socket position, proposed value)` pairs.
    Proposes(Vec<(usize, Elem)>),
}

pub struct Decoder<'a> {
    graph: &'a TannerGraph,
    code: &'a ComponentCode,
    config: DecoderConfig,
}

impl<'a> Decoder<'a> {
    pub fn new(
        graph: &'a TannerGraph,
        code: &'a ComponentCode,
        config: DecoderConfig,
    ) -> Result<Self, DecoderError> {
        let (c, c1) = (graph.var_degree(), config.c1);
        if code.blocklength() != graph.check_degree() {
            return Err(DecoderError::BlocklengthMismatch {
                code: code.blocklength(),
                graph: graph.check_degree(),
            });
        }
        if c1 == 0 || c1 > c {
            return Err(DecoderError::BadThreshold { c1, c });
        }
        if code.field().order() > 2 && 2 * c1 <= c {
            return Err(DecoderError::NonBinaryThreshold { c1, c });
        }
        Ok(Decoder {
            graph,
            code,
            config,
        })
    }

    pub fn config(&self) -> DecoderConfig {
        self.config
    }

    fn check_word(&self, word: &[Elem]) -> Result<(), DecoderError> {
        let n = self.graph.num_variables();
        if word.len() != n {
            return Err(DecoderError::WrongLength {
                expected: n,
                got: word.len(),
            });
        }
        match word.iter().find(|&&x| !self.code.field().contains(x)) {
            Some(&x) => Err(DecoderError::SymbolOutOfField(x)),
            None => Ok(()),
        }
    }

    fn local_word(&self, word: &[Elem], j: usize, buf: &mut Vec<Elem>) {
        buf.clear();
        buf.extend(self.graph.check_neighbors(j).iter().map(|&v| word[v as usize]));
    }

    fn check_state(&self, word: &[Elem], j: usize, buf: &mut Vec<Elem>) -> CheckState {
        self.local_word(word, j, buf);
        match self.code.corrections(buf) {
            None => CheckState::Failed,
            Some(fixes) if fixes.is_empty() => CheckState::Satisfied,
            Some(fixes) => CheckState::Proposes(fixes),
        }
    }

    /// Moves that one iteration from `word` would apply, sorted by variable.
    pub fn flips(&self, word: &[Elem]) -> Result<Vec<(usize, Elem)>, DecoderError> {
        self.check_word(word)?;
        let mut buf = Vec::with_capacity(self.graph.check_degree());
        let states: Vec<CheckState> = (0..self.graph.num_checks())
            .map(|j| self.check_state(word, j, &mut buf))
            .collect();
        Ok(self.tally(&states))
    }

    fn tally(&self, states: &[CheckState]) -> Vec<(usize, Elem)> {
        let mut votes: Vec<(u32, Elem)> = Vec::new();
        for (j, state) in states.iter().enumerate() {
            if let CheckState::Proposes(fixes) = state {
                let nb = self.graph.check_neighbors(j);
                votes.extend(fixes.iter().map(|&(pos, x)| (nb[pos], x)));
            }
        }
        votes.sort_unstable();
        let mut moves: Vec<(usize, Elem)> = Vec::new();
        for run in votes.chunk_by(|a, b| a == b) {
            if run.len() >= self.config.c1 {
                let (v, x) = run[0];
                debug_assert!(
                    moves.last().is_none_or(|&(u, _)| u != v as usize),
                    "variable {v} reached the threshold for two values"
                );
                moves.push((v as usize, x));
            }
        }
        moves
    }

    pub fn decode(&self, received: &[Elem]) -> Result<DecodeResult, DecoderError> {
        self.run(received, None)
    }

    /// Decodes and records how many positions differ from `reference` after
    /// each iteration.
    pub fn decode_with_reference(
        &self,
        received: &[Elem],
        reference: &[Elem],
    ) -> Result<DecodeResult, DecoderError> {
        self.check_word(reference)?;
        self.run(received, Some(reference))
    }

    fn run(&self, received: &[Elem], reference: Option<&[Elem]>) -> Result<DecodeResult, DecoderError> {
        self.check_word(received)?;
        let graph = self.graph;
        let mut word = received.to_vec();
        let mut buf = Vec::with_capacity(graph.check_degree());
        let mut states: Vec<CheckState> = (0..graph.num_checks())
            .map(|j| self.check_state(&word, j, &mut buf))
            .collect();
        let mut unsatisfied = states
            .iter()
            .filter(|s| !matches!(s, CheckState::Satisfied))
            .count();
        let corrupt = |w: &[Elem], r: &[Elem]| w.iter().zip(r).filter(|(a, b)| a != b).count();
        let mut trace = reference.map(|r| vec![corrupt(&word, r)]);

        let mut iterations = 0;
        let mut touched: Vec<usize> = Vec::new();
        let termination = loop {
            if iterations == self.config.max_iterations {
                break Termination::IterationCap;
            }
            iterations += 1;
            let moves = self.tally(&states);
            if moves.is_empty() {
                break Termination::Fixpoint;
            }
            touched.clear();
            for &(v, x) in &moves {
                word[v] = x;
                touched.extend(graph.var_neighbors(v).iter().map(|&j| j as usize));
            }
            touched.sort_unstable();
            touched.dedup();
            for &j in &touched {
                let was = !matches!(states[j], CheckState::Satisfied);
                states[j] = self.check_state(&word, j, &mut buf);
                let now = !matches!(states[j], CheckState::Satisfied);
                unsatisfied = unsatisfied + now as usize - was as usize;
            }
            if let (Some(t), Some(r)) = (trace.as_mut(), reference) {
                t.push(corrupt(&word, r));
            }
            if unsatisfied == 0 {
                break Termination::Fixpoint;
            }
        };
        Ok(DecodeResult {
            word,
            iterations,
            termination,
            corrupt_trace: trace,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn hamming_graph(n: usize, c: usize, seed: u64) -> (TannerGraph, ComponentCode) {
        let code = ComponentCode::hamming(3).unwrap();
        (TannerGraph::sample(n, c, 7, seed).unwrap(), code)
    }

    #[test]
    fn zero_word_stops_after_one_iteration() {
        let (g, code) = hamming_graph(70, 3, 1);
        let dec = Decoder::new(&g, &code, DecoderConfig::new(2)).unwrap();
        let r = dec.decode(&vec![0; 70]).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.termination, Termination::Fixpoint);
        assert!(r.word.iter().all(|&x| x == 0));
    }

    #[test]
    fn single_error_on_simple_variable_is_fixed_in_one_iteration() {
        let (g, code) = hamming_graph(70, 3, 2);
        let dec = Decoder::new(&g, &code, DecoderConfig::new(2)).unwrap();
        let v = (0..70).find(|&v| g.is_simple_at(v)).unwrap();
        let mut w = vec![0; 70];
        w[v] = 1;
        let r = dec.decode_with_reference(&w, &vec![0; 70]).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.corrupt_trace, Some(vec![1, 0]));
    }

    #[test]
    fn iteration_cap_is_respected() {
        let (g, code) = hamming_graph(70, 3, 3);
        let config = DecoderConfig {
            c1: 2,
            max_iterations: 0,
        };
        let dec = Decoder::new(&g, &code, config).unwrap();
        let mut w = vec![0; 70];
        w[5] = 1;
        let r = dec.decode(&w).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.termination, Termination::IterationCap);
        assert_eq!(r.word, w);
    }

    #[test]
    fn rejects_bad_configurations() {
        let (g, code) = hamming_graph(70, 3, 4);
        assert!(matches!(
            Decoder::new(&g, &code, DecoderConfig::new(4)),
            Err(DecoderError::BadThreshold { .. })
        ));
        let rs = ComponentCode::reed_solomon(7, 3, Field::new(8).unwrap()).unwrap();
        assert!(matches!(
            Decoder::new(&g, &rs, DecoderConfig::new(1)),
            Err(DecoderError::NonBinaryThreshold { .. })
        ));
        let dec = Decoder::new(&g, &code, DecoderConfig::new(2)).unwrap();
        assert!(matches!(dec.decode(&[0; 3]), Err(DecoderError::WrongLength { .. })));
        assert!(matches!(
            dec.decode(&vec![2; 70]),
            Err(DecoderError::SymbolOutOfField(2))
        ));
    }

    #[test]
    fn flips_match_the_first_decoding_step() {
        let (g, code) = hamming_graph(70, 3, 5);
        let dec = Decoder::new(&g, &code, DecoderConfig::new(2)).unwrap();
        let mut w = vec![0; 70];
        for v in [3, 17, 40] {
            w[v] = 1;
        }
        let moves = dec.flips(&w).unwrap();
        let one_step = Decoder::new(
            &g,
            &code,
            DecoderConfig {
                c1: 2,
                max_iterations: 1,
            },
        )
        .unwrap()
        .decode(&w)
        .unwrap();
        let mut expected = w.clone();
        for (v, x) in moves {
            expected[v] = x;
        }
        assert_eq!(one_step.word, expected);
    }
}
