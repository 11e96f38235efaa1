use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use gldpc::codes::{CodeSpec, ComponentCode};
use gldpc::field::{Elem, Field};

/// Every codeword, by encoding every message.
fn codebook(code: &ComponentCode) -> Vec<Vec<Elem>> {
    let q = code.field().order();
    let k = code.dimension();
    let mut out = Vec::new();
    let mut msg = vec![0; k];
    loop {
        out.push(code.encode(&msg).unwrap());
        let mut i = 0;
        while i < k {
            msg[i] += 1;
            if msg[i] < q {
                break;
            }
            msg[i] = 0;
            i += 1;
        }
        if i == k {
            return out;
        }
    }
}

fn distance(a: &[Elem], b: &[Elem]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Nearest-codeword search restricted to radius `t`.
fn oracle_bdd(book: &[Vec<Elem>], t: usize, v: &[Elem]) -> Option<Vec<Elem>> {
    book.iter().find(|w| distance(w, v) <= t).cloned()
}

fn perturb(rng: &mut ChaCha20Rng, q: u32, w: &[Elem], max_weight: usize) -> Vec<Elem> {
    let mut v = w.to_vec();
    let weight = rng.random_range(0..=max_weight.min(v.len()));
    for p in rand::seq::index::sample(rng, v.len(), weight) {
        v[p] = rng.random_range(0..q);
    }
    v
}

fn compare_with_oracle(code: &ComponentCode, samples: usize, seed: u64) {
    let book = codebook(code);
    assert_eq!(book.len(), (code.field().order() as usize).pow(code.dimension() as u32));
    let t = code.radius();
    let q = code.field().order();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut nulls = 0;
    for _ in 0..samples {
        let w = &book[rng.random_range(0..book.len())];
        let v = perturb(&mut rng, q, w, 2 * t + 2);
        let expected = oracle_bdd(&book, t, &v);
        nulls += expected.is_none() as usize;
        assert_eq!(code.bdd(&v).unwrap(), expected, "received {v:?}");
    }
    assert!(nulls > 0, "sample never left the decoding spheres");
}

#[test]
fn reed_solomon_matches_codebook_search() {
    let rs = ComponentCode::reed_solomon(7, 3, Field::new(8).unwrap()).unwrap();
    assert_eq!(rs.min_distance(), 5);
    compare_with_oracle(&rs, 20_000, 1);
    let rs = ComponentCode::reed_solomon(4, 2, Field::new(5).unwrap()).unwrap();
    compare_with_oracle(&rs, 5_000, 2);
    let rs = ComponentCode::reed_solomon(12, 6, Field::new(13).unwrap()).unwrap();
    assert_eq!(rs.radius(), 3);
}

#[test]
fn generic_code_agrees_with_reed_solomon() {
    let field = Field::new(8).unwrap();
    let rs = ComponentCode::reed_solomon(7, 3, field.clone()).unwrap();
    let generator: Vec<Vec<Elem>> = (0..3)
        .map(|i| {
            let mut m = vec![0; 3];
            m[i] = 1;
            rs.encode(&m).unwrap()
        })
        .collect();
    let generic = ComponentCode::generic(field, generator, None).unwrap();
    assert_eq!(generic.min_distance(), 5);
    assert_eq!(generic.radius(), 2);
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    for _ in 0..5_000 {
        let v: Vec<Elem> = (0..7).map(|_| rng.random_range(0..8)).collect();
        assert_eq!(generic.bdd(&v).unwrap(), rs.bdd(&v).unwrap());
    }
}

#[test]
fn hamming_is_perfect() {
    let code = ComponentCode::hamming(3).unwrap();
    let book = codebook(&code);
    assert_eq!(book.len(), 16);
    for x in 0..128u32 {
        let v: Vec<Elem> = (0..7).map(|j| (x >> j) & 1).collect();
        let decoded = code.bdd(&v).unwrap().expect("every word is within distance 1");
        assert_eq!(Some(decoded), oracle_bdd(&book, 1, &v));
    }
}

#[test]
fn spec_parameters() {
    let h = CodeSpec::Hamming { m: 7 };
    assert_eq!((h.blocklength(), h.dimension(), h.radius(), h.q()), (127, 120, 1, 2));
    let rs = CodeSpec::Rs { d: 40, k: 32, q: 41 };
    assert_eq!((rs.blocklength(), rs.dimension(), rs.radius(), rs.q()), (40, 32, 4, 41));
    assert!(CodeSpec::Rs { d: 40, k: 32, q: 31 }.build().is_err());
    assert!(ComponentCode::hamming(1).is_err());
}

#[test]
fn rejects_malformed_words() {
    let code = ComponentCode::reed_solomon(30, 24, Field::new(31).unwrap()).unwrap();
    assert!(code.bdd(&[0; 29]).is_err());
    let mut v = vec![0; 30];
    v[4] = 31;
    assert!(code.bdd(&v).is_err());
    assert!(code.encode(&[0; 23]).is_err());
}

fn rs_30_24() -> ComponentCode {
    ComponentCode::reed_solomon(30, 24, Field::new(31).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn encoded_words_have_zero_syndrome(msg in proptest::collection::vec(0u32..31, 24)) {
        let code = rs_30_24();
        let cw = code.encode(&msg).unwrap();
        prop_assert!(code.is_codeword(&cw).unwrap());
        prop_assert!(code.syndrome(&cw).unwrap().iter().all(|&s| s == 0));
        prop_assert_eq!(code.bdd(&cw).unwrap(), Some(cw));
    }

    #[test]
    fn corrections_touch_only_error_positions(
        msg in proptest::collection::vec(0u32..31, 24),
        errs in proptest::collection::btree_map(0usize..30, 1u32..31, 0..=3),
    ) {
        let code = rs_30_24();
        let field = code.field().clone();
        let cw = code.encode(&msg).unwrap();
        let mut v = cw.clone();
        for (&p, &e) in &errs {
            v[p] = field.add(v[p], e);
        }
        let fixes = code.corrections(&v).unwrap();
        prop_assert_eq!(fixes.len(), errs.len());
        for (p, x) in fixes {
            prop_assert!(errs.contains_key(&p));
            prop_assert_eq!(x, cw[p]);
        }
    }
}
