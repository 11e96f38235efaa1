//! Component codes attached to the check nodes: binary Hamming codes,
//! Reed-Solomon codes over prime and binary-extension fields, and small
//! generic linear codes given by a generator matrix.

mod linalg;
mod rs;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Elem, Field, FieldError};
use linalg::{rref, SystematicEncoder};

/// Largest codebook enumerated for a generic linear code.
pub const MAX_GENERIC_CODEWORDS: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),
    #[error("field of order {q} too small for blocklength {d}; need q >= d + 1")]
    FieldTooSmall { q: u32, d: usize },
    #[error("expected a vector of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("symbol {symbol} is not an element of GF({q})")]
    SymbolOutOfField { symbol: Elem, q: u32 },
    #[error("code has more than {MAX_GENERIC_CODEWORDS} codewords")]
    TooManyCodewords,
    #[error("minimum distance {d_min} cannot correct {t} errors")]
    DistanceTooSmall { d_min: usize, t: usize },
    #[error("cannot parse code description {0:?}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeFamily {
    Hamming,
    ReedSolomon,
    GenericLinear,
}

#[derive(Clone, Debug)]
enum Kind {
    Hamming,
    ReedSolomon { points: Vec<Elem> },
    Generic { codewords: Vec<Vec<Elem>>, d_min: usize },
}

/// A linear code of blocklength `d` with a `t`-bounded-distance decoder.
#[derive(Clone, Debug)]
pub struct ComponentCode {
    field: Field,
    d: usize,
    k: usize,
    t: usize,
    kind: Kind,
    parity_check: Vec<Vec<Elem>>,
    encoder: SystematicEncoder,
}

impl ComponentCode {
    /// Binary Hamming code of length `2^m - 1`; column `j` of the parity-check
    /// matrix is the binary expansion of `j + 1`.
    pub fn hamming(m: u32) -> Result<Self, CodeError> {
        if !(3..=11).contains(&m) {
            return Err(CodeError::InvalidParameters(format!(
                "Hamming parameter m = {m} outside 3..=11"
            )));
        }
        let field = Field::new(2)?;
        let d = (1usize << m) - 1;
        let h: Vec<Vec<Elem>> = (0..m)
            .map(|i| (1..=d).map(|j| ((j >> i) & 1) as Elem).collect())
            .collect();
        Ok(Self::assemble(field, d, 1, Kind::Hamming, h))
    }

    /// Reed-Solomon code with `d - k` check symbols over `field`, evaluation
    /// points `g^0, ..., g^{d-1}` for the field's primitive element `g`.
    pub fn reed_solomon(d: usize, k: usize, field: Field) -> Result<Self, CodeError> {
        if k == 0 || k >= d {
            return Err(CodeError::InvalidParameters(format!(
                "Reed-Solomon dimension k = {k} must satisfy 0 < k < d = {d}"
            )));
        }
        if (field.order() as usize) < d + 1 {
            return Err(CodeError::FieldTooSmall {
                q: field.order(),
                d,
            });
        }
        let r = d - k;
        let points: Vec<Elem> = (0..d).map(|j| field.alpha_pow(j as i64)).collect();
        let h: Vec<Vec<Elem>> = (1..=r)
            .map(|i| points.iter().map(|&a| field.pow(a, i as u64)).collect())
            .collect();
        Ok(Self::assemble(field, d, r / 2, Kind::ReedSolomon { points }, h))
    }

    /// Linear code spanned by the rows of `generator`. The codebook is
    /// enumerated to find the minimum distance; `t` defaults to the largest
    /// radius it supports.
    pub fn generic(
        field: Field,
        generator: Vec<Vec<Elem>>,
        t: Option<usize>,
    ) -> Result<Self, CodeError> {
        let d = generator.first().map_or(0, Vec::len);
        if d == 0 || generator.iter().any(|row| row.len() != d) {
            return Err(CodeError::InvalidParameters(
                "generator rows must be nonempty and of equal length".into(),
            ));
        }
        for &x in generator.iter().flatten() {
            check_symbol(&field, x)?;
        }
        let mut g = generator;
        let pivots = rref(&field, &mut g);
        let k = pivots.len();
        if k == 0 {
            return Err(CodeError::InvalidParameters("generator has rank 0".into()));
        }
        let q = field.order() as usize;
        if (k as f64) * (q as f64).log2() > (MAX_GENERIC_CODEWORDS as f64).log2() + 1e-9 {
            return Err(CodeError::TooManyCodewords);
        }

        let mut codewords = Vec::with_capacity(q.pow(k as u32));
        let mut msg = vec![0 as Elem; k];
        loop {
            let mut word = vec![0; d];
            for (row, &m) in g.iter().zip(&msg) {
                for (w, &x) in word.iter_mut().zip(row) {
                    *w = field.add(*w, field.mul(m, x));
                }
            }
            codewords.push(word);
            // odometer over GF(q)^k
            let Some(pos) = msg.iter().position(|&m| (m as usize) < q - 1) else {
                break;
            };
            msg[pos] += 1;
            msg[..pos].iter_mut().for_each(|m| *m = 0);
        }
        let d_min = codewords
            .iter()
            .map(|w| w.iter().filter(|&&x| x != 0).count())
            .filter(|&wt| wt > 0)
            .min()
            .unwrap_or(d + 1);
        let max_t = (d_min - 1) / 2;
        let t = t.unwrap_or(max_t);
        if t == 0 || t > max_t {
            return Err(CodeError::DistanceTooSmall { d_min, t });
        }

        // Parity checks: each non-pivot column is fixed by the pivots.
        let h: Vec<Vec<Elem>> = (0..d)
            .filter(|j| !pivots.contains(j))
            .map(|j| {
                let mut row = vec![0; d];
                row[j] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    row[p] = field.neg(g[i][j]);
                }
                row
            })
            .collect();
        Ok(Self::assemble(field, d, t, Kind::Generic { codewords, d_min }, h))
    }

    fn assemble(field: Field, d: usize, t: usize, kind: Kind, h: Vec<Vec<Elem>>) -> Self {
        let encoder = SystematicEncoder::from_parity_check(&field, h.clone(), d);
        ComponentCode {
            k: encoder.dimension(),
            field,
            d,
            t,
            kind,
            parity_check: h,
            encoder,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn blocklength(&self) -> usize {
        self.d
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    /// Correction radius `t` of the bounded-distance decoder.
    pub fn radius(&self) -> usize {
        self.t
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.d as f64
    }

    pub fn family(&self) -> CodeFamily {
        match self.kind {
            Kind::Hamming => CodeFamily::Hamming,
            Kind::ReedSolomon { .. } => CodeFamily::ReedSolomon,
            Kind::Generic { .. } => CodeFamily::GenericLinear,
        }
    }

    /// Exhaustively verified minimum distance of a generic code; the designed
    /// distance for Hamming (3) and Reed-Solomon (`d - k + 1`) codes.
    pub fn min_distance(&self) -> usize {
        match &self.kind {
            Kind::Hamming => 3,
            Kind::ReedSolomon { .. } => self.d - self.k + 1,
            Kind::Generic { d_min, .. } => *d_min,
        }
    }

    pub fn parity_check(&self) -> &[Vec<Elem>] {
        &self.parity_check
    }

    /// Codeword positions that carry the message symbols.
    pub fn message_positions(&self) -> &[usize] {
        self.encoder.message_positions()
    }

    fn check_word(&self, v: &[Elem], expected: usize) -> Result<(), CodeError> {
        if v.len() != expected {
            return Err(CodeError::WrongLength {
                expected,
                got: v.len(),
            });
        }
        v.iter().try_for_each(|&x| check_symbol(&self.field, x))
    }

    /// Systematic encoding: the message appears at `message_positions()`.
    pub fn encode(&self, message: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        self.check_word(message, self.k)?;
        Ok(self.encoder.encode(&self.field, self.d, message))
    }

    pub fn syndrome(&self, v: &[Elem]) -> Result<Vec<Elem>, CodeError> {
        self.check_word(v, self.d)?;
        Ok(self
            .parity_check
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&h, &x)| self.field.add(acc, self.field.mul(h, x)))
            })
            .collect())
    }

    pub fn is_codeword(&self, v: &[Elem]) -> Result<bool, CodeError> {
        Ok(self.syndrome(v)?.iter().all(|&s| s == 0))
    }

    /// Bounded-distance decoding: the unique codeword within distance `t` of
    /// `v`, or `None`.
    pub fn bdd(&self, v: &[Elem]) -> Result<Option<Vec<Elem>>, CodeError> {
        self.check_word(v, self.d)?;
        Ok(self.corrections(v).map(|fixes| {
            let mut w = v.to_vec();
            for (j, x) in fixes {
                w[j] = x;
            }
            w
        }))
    }

    /// The symbols bounded-distance decoding changes, as `(position, new
    /// value)` pairs, or `None` when no codeword lies within distance `t`.
    /// `v` must have length `d` with symbols in the field.
    pub fn corrections(&self, v: &[Elem]) -> Option<Vec<(usize, Elem)>> {
        debug_assert_eq!(v.len(), self.d);
        match &self.kind {
            Kind::Hamming => {
                let s = v
                    .iter()
                    .enumerate()
                    .filter(|&(_, &x)| x != 0)
                    .fold(0usize, |acc, (j, _)| acc ^ (j + 1));
                Some(if s == 0 { Vec::new() } else { vec![(s - 1, v[s - 1] ^ 1)] })
            }
            Kind::ReedSolomon { points } => {
                rs::corrections(&self.field, points, self.d - self.k, self.t, v)
            }
            Kind::Generic { codewords, .. } => codewords.iter().find_map(|w| {
                let diff: Vec<(usize, Elem)> = w
                    .iter()
                    .zip(v)
                    .enumerate()
                    .filter(|(_, (a, b))| a != b)
                    .map(|(j, (&a, _))| (j, a))
                    .take(self.t + 1)
                    .collect();
                (diff.len() <= self.t).then_some(diff)
            }),
        }
    }
}

fn check_symbol(field: &Field, x: Elem) -> Result<(), CodeError> {
    if field.contains(x) {
        Ok(())
    } else {
        Err(CodeError::SymbolOutOfField {
            symbol: x,
            q: field.order(),
        })
    }
}

/// A code named by family and parameters, e.g. `hamming:m=7` or
/// `rs:d=30,k=24,q=31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CodeSpec {
    Hamming { m: u32 },
    Rs { d: usize, k: usize, q: u32 },
}

impl CodeSpec {
    pub fn build(&self) -> Result<ComponentCode, CodeError> {
        match *self {
            CodeSpec::Hamming { m } => ComponentCode::hamming(m),
            CodeSpec::Rs { d, k, q } => ComponentCode::reed_solomon(d, k, Field::new(q)?),
        }
    }

    /// Blocklength `d` of the named code.
    pub fn blocklength(&self) -> usize {
        match *self {
            CodeSpec::Hamming { m } => (1usize << m) - 1,
            CodeSpec::Rs { d, .. } => d,
        }
    }

    /// Correction radius of the named code.
    pub fn radius(&self) -> usize {
        match *self {
            CodeSpec::Hamming { .. } => 1,
            CodeSpec::Rs { d, k, .. } => (d.saturating_sub(k)) / 2,
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            CodeSpec::Hamming { m } => (1usize << m) - 1 - m as usize,
            CodeSpec::Rs { k, .. } => k,
        }
    }

    /// Field order of the code's alphabet.
    pub fn q(&self) -> u32 {
        match *self {
            CodeSpec::Hamming { .. } => 2,
            CodeSpec::Rs { q, .. } => q,
        }
    }
}

impl FromStr for CodeSpec {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CodeError::Parse(s.to_string());
        let (family, params) = s.split_once(':').ok_or_else(bad)?;
        let mut values = std::collections::BTreeMap::new();
        for item in params.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(bad)?;
            let value: u64 = value.trim().parse().map_err(|_| bad())?;
            if values.insert(key.trim(), value).is_some() {
                return Err(bad());
            }
        }
        let mut take = |key: &str| values.remove(key).ok_or_else(bad);
        let spec = match family.trim() {
            "hamming" => CodeSpec::Hamming {
                m: u32::try_from(take("m")?).map_err(|_| bad())?,
            },
            "rs" => CodeSpec::Rs {
                d: take("d")? as usize,
                k: take("k")? as usize,
                q: u32::try_from(take("q")?).map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        if values.is_empty() {
            Ok(spec)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Hamming { m } => write!(f, "hamming:m={m}"),
            CodeSpec::Rs { d, k, q } => write!(f, "rs:d={d},k={k},q={q}"),
        }
    }
}
