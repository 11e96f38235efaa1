//! Dense matrices over a finite field: row reduction and the systematic
//! encoder shared by all code families.

use crate::field::{Elem, Field};

/// Reduced row echelon form in place; returns the pivot columns.
/// Zero rows are dropped.
pub(crate) fn rref(field: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for j in 0..ncols {
                    let sub = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], sub);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Systematic encoder derived from a parity-check matrix in reduced form:
/// message symbols occupy the non-pivot columns, parity symbols the pivots.
#[derive(Clone, Debug)]
pub(crate) struct SystematicEncoder {
    /// Reduced parity-check rows.
    reduced: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    message_positions: Vec<usize>,
}

impl SystematicEncoder {
    pub(crate) fn from_parity_check(field: &Field, mut h: Vec<Vec<Elem>>, n: usize) -> Self {
        let pivots = if h.is_empty() { Vec::new() } else { rref(field, &mut h) };
        let message_positions = (0..n).filter(|j| !pivots.contains(j)).collect();
        SystematicEncoder {
            reduced: h,
            pivots,
            message_positions,
        }
    }

    pub(crate) fn dimension(&self) -> usize {
        self.message_positions.len()
    }

    pub(crate) fn message_positions(&self) -> &[usize] {
        &self.message_positions
    }

    pub(crate) fn encode(&self, field: &Field, n: usize, message: &[Elem]) -> Vec<Elem> {
        let mut word = vec![0; n];
        for (&pos, &m) in self.message_positions.iter().zip(message) {
            word[pos] = m;
        }
        // Row i reads x_{pivot_i} + Σ_{non-pivot j} h_ij x_j = 0.
        for (row, &p) in self.reduced.iter().zip(&self.pivots) {
            let mut acc = 0;
            for &j in &self.message_positions {
                acc = field.add(acc, field.mul(row[j], word[j]));
            }
            word[p] = field.neg(acc);
        }
        word
    }
}
