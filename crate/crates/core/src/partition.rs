//! Classification of a corrupt set against a concrete Tanner graph, the
//! "possibly bad" test, and the exhaustive expurgation scan.
//!
//! For a corrupt set `B`: `J_b` holds the checks with more than `t` edges into
//! `B` (parallel edges counted), `B_?` the members of `B` with fewer than `c1`
//! edges into `J_g`, and `G_?` the variables outside `B` with at least `c1`
//! edges into `J_b`. One decoder iteration leaves at most `|B_?| + |G_?|`
//! corrupt variables, so `B` is possibly bad when `|G_?| ≥ |B| - |B_?|`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::ln_binomial;
use crate::ensemble::TannerGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("corrupt set is empty")]
    EmptySet,
    #[error("variable {v} out of range for N = {n}")]
    OutOfRange { v: usize, n: usize },
    #[error("variable {0} listed twice")]
    Duplicate(usize),
    #[error("b_max must be at least 1")]
    ZeroBMax,
    #[error("scan needs {needed:.3e} candidate sets, budget is {budget}")]
    BudgetExceeded { needed: f64, budget: u64 },
}

/// Sizes of a Γ-partition: `a = |B|`, `g = |B_?|`, `dl = |G_?|`,
/// `ph = |J_b|`, `om` edges between `B` and `J_b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PartitionCounts {
    pub a: usize,
    pub g: usize,
    pub dl: usize,
    pub ph: usize,
    pub om: usize,
}

impl PartitionCounts {
    /// `|G_?| ≥ |B| - |B_?|`.
    pub fn is_possibly_bad(&self) -> bool {
        self.dl + self.g >= self.a
    }

    /// The counting relations every Γ-partition of an `(N, c, d)` graph obeys.
    pub fn satisfies_invariants(&self, n: usize, c: usize, d: usize, c1: usize, t: usize) -> bool {
        let &PartitionCounts { a, g, dl, ph, om } = self;
        let sockets = n * c;
        a <= n
            && g <= a
            && dl <= n - a
            && ph * d <= sockets
            && (t + 1) * ph <= om
            && om <= a * c
            && om <= ph * d
            && a * c - om <= sockets - ph * d
            && dl * c1 <= ph * d - om
            && g * (c + 1 - c1) <= om
    }
}

/// The eight index sets of a classified corrupt set, each sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionWitness {
    pub b: Vec<usize>,
    pub b_unsure: Vec<usize>,
    pub b_good: Vec<usize>,
    pub g: Vec<usize>,
    pub g_unsure: Vec<usize>,
    pub g_good: Vec<usize>,
    pub j_bad: Vec<usize>,
    pub j_good: Vec<usize>,
    /// Edges between `B` and `J_b`.
    pub bad_edges: usize,
}

impl PartitionWitness {
    pub fn counts(&self) -> PartitionCounts {
        PartitionCounts {
            a: self.b.len(),
            g: self.b_unsure.len(),
            dl: self.g_unsure.len(),
            ph: self.j_bad.len(),
            om: self.bad_edges,
        }
    }

    pub fn is_possibly_bad(&self) -> bool {
        self.counts().is_possibly_bad()
    }
}

fn membership(graph: &TannerGraph, set: &[usize]) -> Result<Vec<bool>, PartitionError> {
    let n = graph.num_variables();
    if set.is_empty() {
        return Err(PartitionError::EmptySet);
    }
    let mut member = vec![false; n];
    for &v in set {
        if v >= n {
            return Err(PartitionError::OutOfRange { v, n });
        }
        if std::mem::replace(&mut member[v], true) {
            return Err(PartitionError::Duplicate(v));
        }
    }
    Ok(member)
}

pub fn classify(
    graph: &TannerGraph,
    b: &[usize],
    c1: usize,
    t: usize,
) -> Result<PartitionWitness, PartitionError> {
    let in_b = membership(graph, b)?;
    Ok(classify_members(graph, &in_b, c1, t))
}

fn classify_members(graph: &TannerGraph, in_b: &[bool], c1: usize, t: usize) -> PartitionWitness {
    let n = graph.num_variables();
    let b_edges: Vec<usize> = (0..graph.num_checks())
        .map(|j| graph.check_neighbors(j).iter().filter(|&&v| in_b[v as usize]).count())
        .collect();
    let bad_check: Vec<bool> = b_edges.iter().map(|&e| e > t).collect();
    let (j_bad, j_good): (Vec<usize>, Vec<usize>) =
        (0..graph.num_checks()).partition(|&j| bad_check[j]);
    let bad_edges = j_bad.iter().map(|&j| b_edges[j]).sum();

    let to_bad = |v: usize| graph.var_neighbors(v).iter().filter(|&&j| bad_check[j as usize]).count();
    let c = graph.var_degree();
    let mut w = PartitionWitness {
        b: Vec::new(),
        b_unsure: Vec::new(),
        b_good: Vec::new(),
        g: Vec::new(),
        g_unsure: Vec::new(),
        g_good: Vec::new(),
        j_bad,
        j_good,
        bad_edges,
    };
    for v in 0..n {
        let k = to_bad(v);
        if in_b[v] {
            w.b.push(v);
            if c - k < c1 {
                w.b_unsure.push(v);
            } else {
                w.b_good.push(v);
            }
        } else {
            w.g.push(v);
            if k >= c1 {
                w.g_unsure.push(v);
            } else {
                w.g_good.push(v);
            }
        }
    }
    w
}

pub fn is_possibly_bad(
    graph: &TannerGraph,
    b: &[usize],
    c1: usize,
    t: usize,
) -> Result<bool, PartitionError> {
    Ok(classify(graph, b, c1, t)?.is_possibly_bad())
}

/// Every possibly bad `B` with `1 ≤ |B| ≤ b_max`, ordered by size and then
/// colexicographically. Fails before enumerating anything when the number of
/// candidate sets exceeds `budget`.
pub fn expurgation_scan(
    graph: &TannerGraph,
    b_max: usize,
    c1: usize,
    t: usize,
    budget: u64,
) -> Result<Vec<Vec<usize>>, PartitionError> {
    if b_max == 0 {
        return Err(PartitionError::ZeroBMax);
    }
    let n = graph.num_variables();
    let b_max = b_max.min(n);
    let needed: f64 = (1..=b_max)
        .map(|k| ln_binomial(n as u64, k as u64).exp())
        .sum();
    if needed > budget as f64 {
        return Err(PartitionError::BudgetExceeded { needed, budget });
    }

    let mut found: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|top| {
            let mut scan = Scan {
                graph,
                c1,
                t,
                b_max,
                b_edges: vec![0; graph.num_checks()],
                overfull: 0,
                in_b: vec![false; n],
                stack: Vec::with_capacity(b_max),
                found: Vec::new(),
            };
            scan.push(top);
            scan.visit();
            scan.found
        })
        .flatten()
        .collect();
    found.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.iter().rev().cmp(y.iter().rev())));
    Ok(found)
}

struct Scan<'a> {
    graph: &'a TannerGraph,
    c1: usize,
    t: usize,
    b_max: usize,
    b_edges: Vec<usize>,
    /// Checks with more than `t` edges into the current set.
    overfull: usize,
    in_b: Vec<bool>,
    /// Current set, largest element first.
    stack: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Scan<'_> {
    fn push(&mut self, v: usize) {
        for &j in self.graph.var_neighbors(v) {
            let e = &mut self.b_edges[j as usize];
            *e += 1;
            if *e == self.t + 1 {
                self.overfull += 1;
            }
        }
        self.in_b[v] = true;
        self.stack.push(v);
    }

    fn pop(&mut self) {
        let v = self.stack.pop().expect("nonempty stack");
        self.in_b[v] = false;
        for &j in self.graph.var_neighbors(v) {
            let e = &mut self.b_edges[j as usize];
            if *e == self.t + 1 {
                self.overfull -= 1;
            }
            *e -= 1;
        }
    }

    fn visit(&mut self) {
        // With J_b empty every member of B is corrected and no outsider moves.
        if self.overfull > 0
            && classify_members(self.graph, &self.in_b, self.c1, self.t).is_possibly_bad()
        {
            let mut set = self.stack.clone();
            set.reverse();
            self.found.push(set);
        }
        if self.stack.len() == self.b_max {
            return;
        }
        let below = *self.stack.last().expect("nonempty stack");
        for v in 0..below {
            self.push(v);
            self.visit();
            self.pop();
        }
    }
}
