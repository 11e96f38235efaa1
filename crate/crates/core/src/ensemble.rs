//! The (c, d)-regular GLDPC ensemble: parameters, socket-permutation Tanner
//! multigraphs, seeded sampling, and the text file format.
//!
//! Variable `v` owns sockets `v*c .. v*c + c` and check `j` owns sockets
//! `j*d .. j*d + d`. The permutation maps each variable socket to a check
//! socket; the position of a check socket within its check is the coordinate
//! of the component code that the edge feeds.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::condition_check;
use crate::codes::CodeSpec;

const GRAPH_MAGIC: &str = "GLDPC-GRAPH v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnsembleError {
    #[error("N*c = {nc} is not divisible by d = {d}")]
    NotDivisible { nc: usize, d: usize },
    #[error("invalid ensemble parameters: {0}")]
    InvalidParameters(String),
    #[error("socket map is not a permutation of 0..{0}")]
    NotPermutation(usize),
    #[error("no simple graph reached after {0} switches")]
    NotSimple(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphFileError {
    #[error("graph file truncated: {0}")]
    Truncated(String),
    #[error("unrecognized graph header {0:?}")]
    BadHeader(String),
    #[error("malformed graph file: {0}")]
    Malformed(String),
    #[error("checksum mismatch: file says {stated:08x}, content hashes to {actual:08x}")]
    ChecksumMismatch { stated: u32, actual: u32 },
    #[error(transparent)]
    Invalid(#[from] EnsembleError),
}

/// `1 - (1 - k0/d) c`, the ensemble's nominal rate.
pub fn nominal_rate(c: usize, d: usize, k0: usize) -> f64 {
    assert!(k0 <= d && d > 0, "dimension {k0} exceeds blocklength {d}");
    (d as f64 - c as f64 * (d - k0) as f64) / d as f64
}

/// The blocklength nearest to `n` (ties upward, at least one step) for which
/// `N c` is a multiple of `d`.
pub fn nearest_admissible_n(n: usize, c: usize, d: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let step = d / gcd(c, d);
    ((n + step / 2) / step).max(1) * step
}

/// Parameters of a (c, d)-regular ensemble with its component code and flip
/// threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub c: usize,
    pub d: usize,
    pub code: CodeSpec,
    pub c1: usize,
}

impl EnsembleParams {
    pub fn new(n: usize, c: usize, code: CodeSpec, c1: usize) -> Result<Self, EnsembleError> {
        let params = EnsembleParams {
            n,
            c,
            d: code.blocklength(),
            code,
            c1,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), EnsembleError> {
        let bad = |msg: String| Err(EnsembleError::InvalidParameters(msg));
        if self.n == 0 || self.c == 0 || self.d == 0 {
            return bad("N, c and d must be positive".into());
        }
        if self.code.blocklength() != self.d {
            return bad(format!(
                "code {} has blocklength {}, not d = {}",
                self.code,
                self.code.blocklength(),
                self.d
            ));
        }
        if (self.n * self.c) % self.d != 0 {
            return Err(EnsembleError::NotDivisible {
                nc: self.n * self.c,
                d: self.d,
            });
        }
        if self.c1 == 0 || self.c1 > self.c {
            return bad(format!("flip threshold c1 = {} outside [1, {}]", self.c1, self.c));
        }
        if self.q() > 2 && 2 * self.c1 <= self.c {
            return bad(format!(
                "non-binary codes need c1 > c/2, got c1 = {}, c = {}",
                self.c1, self.c
            ));
        }
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.code.q()
    }

    pub fn t(&self) -> usize {
        self.code.radius()
    }

    pub fn num_checks(&self) -> usize {
        self.n * self.c / self.d
    }

    /// Whether the flip threshold satisfies the guarantee condition.
    pub fn admissible(&self) -> bool {
        condition_check(self.c, self.c1, self.t())
    }
}

/// A (c, d)-regular Tanner multigraph given by its socket permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    n: usize,
    c: usize,
    d: usize,
    perm: Vec<u32>,
    /// Check index behind every variable socket.
    var_checks: Vec<u32>,
    /// Variable index behind every check socket.
    check_vars: Vec<u32>,
}

impl TannerGraph {
    /// Builds the graph for `perm`, which maps variable socket `i` to check
    /// socket `perm[i]`.
    pub fn from_permutation(
        n: usize,
        c: usize,
        d: usize,
        perm: Vec<u32>,
    ) -> Result<Self, EnsembleError> {
        let nc = n * c;
        if d == 0 || c == 0 || nc % d != 0 {
            return Err(EnsembleError::NotDivisible { nc, d });
        }
        if perm.len() != nc {
            return Err(EnsembleError::NotPermutation(nc));
        }
        let mut check_vars = vec![u32::MAX; nc];
        for (i, &s) in perm.iter().enumerate() {
            let s = s as usize;
            if s >= nc || check_vars[s] != u32::MAX {
                return Err(EnsembleError::NotPermutation(nc));
            }
            check_vars[s] = (i / c) as u32;
        }
        let var_checks = perm.iter().map(|&s| s / d as u32).collect();
        Ok(TannerGraph {
            n,
            c,
            d,
            perm,
            var_checks,
            check_vars,
        })
    }

    /// Uniform socket permutation from a ChaCha20 stream seeded with `seed`,
    /// shuffled by Fisher-Yates.
    pub fn sample(n: usize, c: usize, d: usize, seed: u64) -> Result<Self, EnsembleError> {
        let nc = n * c;
        if d == 0 || c == 0 || nc % d != 0 {
            return Err(EnsembleError::NotDivisible { nc, d });
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut perm: Vec<u32> = (0..nc as u32).collect();
        perm.shuffle(&mut rng);
        Self::from_permutation(n, c, d, perm)
    }

    /// Sample, then remove parallel edges by random switches: a socket on a
    /// repeated edge trades its check socket with a random socket elsewhere
    /// whenever the trade creates no new repeat. The result is simple but not
    /// exactly uniform over simple graphs.
    pub fn sample_simple(n: usize, c: usize, d: usize, seed: u64) -> Result<Self, EnsembleError> {
        let nc = n * c;
        if d == 0 || c == 0 || nc % d != 0 {
            return Err(EnsembleError::NotDivisible { nc, d });
        }
        if c > nc / d {
            return Err(EnsembleError::InvalidParameters(format!(
                "c = {c} exceeds the number of checks"
            )));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut perm: Vec<u32> = (0..nc as u32).collect();
        perm.shuffle(&mut rng);
        let check = |perm: &[u32], i: usize| perm[i] as usize / d;
        let repeated = |perm: &[u32], i: usize| {
            let v = i / c;
            (v * c..(v + 1) * c).any(|k| k != i && check(perm, k) == check(perm, i))
        };
        let limit = 100 * nc + 1000;
        let mut switches = 0;
        let mut i = 0;
        while i < nc {
            if !repeated(&perm, i) {
                i += 1;
                continue;
            }
            loop {
                switches += 1;
                if switches > limit {
                    return Err(EnsembleError::NotSimple(limit));
                }
                let k = rng.random_range(0..nc);
                if k / c == i / c {
                    continue;
                }
                perm.swap(i, k);
                if repeated(&perm, i) || repeated(&perm, k) {
                    perm.swap(i, k);
                } else {
                    break;
                }
            }
            i += 1;
        }
        Self::from_permutation(n, c, d, perm)
    }

    pub fn sample_params(params: &EnsembleParams, seed: u64) -> Result<Self, EnsembleError> {
        params.validate()?;
        Self::sample(params.n, params.c, params.d, seed)
    }

    pub fn num_variables(&self) -> usize {
        self.n
    }

    pub fn num_checks(&self) -> usize {
        self.n * self.c / self.d
    }

    pub fn var_degree(&self) -> usize {
        self.c
    }

    pub fn check_degree(&self) -> usize {
        self.d
    }

    pub fn permutation(&self) -> &[u32] {
        &self.perm
    }

    /// Variables on the sockets of check `j`, in code-coordinate order; a
    /// variable appears once per parallel edge.
    pub fn check_neighbors(&self, j: usize) -> &[u32] {
        &self.check_vars[j * self.d..(j + 1) * self.d]
    }

    /// Checks on the sockets of variable `v`, with multiplicity.
    pub fn var_neighbors(&self, v: usize) -> &[u32] {
        &self.var_checks[v * self.c..(v + 1) * self.c]
    }

    /// Whether no two edges join the same variable and check.
    pub fn is_simple(&self) -> bool {
        (0..self.n).all(|v| self.is_simple_at(v))
    }

    /// Whether variable `v` has no parallel edges.
    pub fn is_simple_at(&self, v: usize) -> bool {
        let nb = self.var_neighbors(v);
        (0..nb.len()).all(|a| !nb[a + 1..].contains(&nb[a]))
    }

    /// Text form: magic line, `N c d`, the permutation, and the CRC32 of the
    /// first three lines (newlines included) in hex.
    pub fn to_text(&self) -> String {
        let perm: Vec<String> = self.perm.iter().map(u32::to_string).collect();
        let body = format!(
            "{GRAPH_MAGIC}\n{} {} {}\n{}\n",
            self.n,
            self.c,
            self.d,
            perm.join(" ")
        );
        let crc = crc32fast::hash(body.as_bytes());
        format!("{body}{crc:08x}\n")
    }

    pub fn parse(text: &str) -> Result<Self, GraphFileError> {
        let mut lines = text.split_inclusive('\n');
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| GraphFileError::Truncated(format!("missing {what}")))
        };
        let magic = next("header")?;
        let dims = next("dimension line")?;
        let perm_line = next("permutation line")?;
        let crc_line = next("checksum line")?;
        if magic.trim_end() != GRAPH_MAGIC {
            return Err(GraphFileError::BadHeader(magic.trim_end().to_string()));
        }
        if !perm_line.ends_with('\n') {
            return Err(GraphFileError::Truncated("permutation line".into()));
        }
        let stated = u32::from_str_radix(crc_line.trim(), 16)
            .map_err(|_| GraphFileError::Malformed(format!("bad checksum {:?}", crc_line.trim())))?;
        let mut hasher = crc32fast::Hasher::new();
        for part in [magic, dims, perm_line] {
            hasher.update(part.as_bytes());
        }
        let actual = hasher.finalize();
        if stated != actual {
            return Err(GraphFileError::ChecksumMismatch { stated, actual });
        }

        let nums: Vec<usize> = dims
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| GraphFileError::Malformed(format!("bad dimensions {:?}", dims.trim())))?;
        let [n, c, d] = nums[..] else {
            return Err(GraphFileError::Malformed(format!(
                "expected `N c d`, got {:?}",
                dims.trim()
            )));
        };
        if d == 0 || c == 0 || (n * c) % d != 0 {
            return Err(EnsembleError::NotDivisible { nc: n * c, d }.into());
        }
        let perm: Vec<u32> = perm_line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| GraphFileError::Malformed("non-integer socket".into()))?;
        if perm.len() != n * c {
            return Err(GraphFileError::Truncated(format!(
                "{} of {} sockets present",
                perm.len(),
                n * c
            )));
        }
        Ok(Self::from_permutation(n, c, d, perm)?)
    }
}
