//! Reed-Solomon bounded-distance decoding: syndromes, Berlekamp-Massey,
//! Chien search and Forney's formula.
//!
//! The code is `{x : Σ_j x_j a_j^i = 0, i = 1..r}` with distinct nonzero
//! evaluation points `a_j = g^j`.

use crate::field::{Elem, Field};

fn eval(field: &Field, poly: &[Elem], x: Elem) -> Elem {
    poly.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
}

/// Syndromes `S_1..S_r`.
pub(crate) fn syndromes(field: &Field, points: &[Elem], r: usize, v: &[Elem]) -> Vec<Elem> {
    let mut s = vec![0; r];
    for (&a, &x) in points.iter().zip(v) {
        if x == 0 {
            continue;
        }
        let mut term = field.mul(x, a);
        for si in s.iter_mut() {
            *si = field.add(*si, term);
            term = field.mul(term, a);
        }
    }
    s
}

/// Shortest LFSR generating `s`; returns the connection polynomial with
/// `C(0) = 1` and its length `L`.
fn berlekamp_massey(field: &Field, s: &[Elem]) -> (Vec<Elem>, usize) {
    let mut c = vec![1];
    let mut b = vec![1];
    let (mut l, mut m, mut last) = (0usize, 1usize, 1 as Elem);
    for n in 0..s.len() {
        let mut disc = s[n];
        for i in 1..=l.min(c.len() - 1) {
            disc = field.add(disc, field.mul(c[i], s[n - i]));
        }
        if disc == 0 {
            m += 1;
            continue;
        }
        let coef = field.div(disc, last);
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            c[i + m] = field.sub(c[i + m], field.mul(coef, bi));
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = disc;
            m = 1;
        } else {
            m += 1;
        }
    }
    while c.len() > 1 && c[c.len() - 1] == 0 {
        c.pop();
    }
    (c, l)
}

/// Positions and corrected values of the unique codeword within distance
/// `t` of `v`, or `None` when there is none.
pub(crate) fn corrections(
    field: &Field,
    points: &[Elem],
    r: usize,
    t: usize,
    v: &[Elem],
) -> Option<Vec<(usize, Elem)>> {
    let s = syndromes(field, points, r, v);
    if s.iter().all(|&x| x == 0) {
        return Some(Vec::new());
    }
    let (lambda, l) = berlekamp_massey(field, &s);
    if l > t || lambda.len() != l + 1 {
        return None;
    }

    // Chien search over the evaluation points.
    let locations: Vec<usize> = (0..points.len())
        .filter(|&j| eval(field, &lambda, field.inv(points[j])) == 0)
        .collect();
    if locations.len() != l {
        return None;
    }

    // Ω = S(x) Λ(x) mod x^r, with S(x) = Σ S_{i+1} x^i.
    let mut omega = vec![0; r];
    for (i, &si) in s.iter().enumerate() {
        for (j, &lj) in lambda.iter().enumerate() {
            if i + j < r {
                omega[i + j] = field.add(omega[i + j], field.mul(si, lj));
            }
        }
    }
    let p = field.characteristic() as usize;
    let deriv: Vec<Elem> = lambda
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| field.mul((i % p) as Elem, c))
        .collect();

    let mut fixes = Vec::with_capacity(l);
    let mut errors = Vec::with_capacity(l);
    for &j in &locations {
        let x_inv = field.inv(points[j]);
        let denom = eval(field, &deriv, x_inv);
        if denom == 0 {
            return None;
        }
        let e = field.neg(field.div(eval(field, &omega, x_inv), denom));
        if e == 0 {
            return None;
        }
        errors.push((points[j], e));
        fixes.push((j, field.sub(v[j], e)));
    }

    // The error pattern must reproduce every syndrome.
    for (i, &si) in s.iter().enumerate() {
        let mut acc = 0;
        for &(a, e) in &errors {
            acc = field.add(acc, field.mul(e, field.pow(a, i as u64 + 1)));
        }
        if acc != si {
            return None;
        }
    }
    Some(fixes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berlekamp_massey_finds_fibonacci_like_recurrence() {
        // s_n = s_{n-1} + s_{n-2} over GF(7): connection 1 - x - x^2
        let f = Field::new(7).unwrap();
        let s = [1, 1, 2, 3, 5, 1, 6, 0];
        let (c, l) = berlekamp_massey(&f, &s);
        assert_eq!(l, 2);
        assert_eq!(c, vec![1, 6, 6]);
    }
}
