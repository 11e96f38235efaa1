use proptest::prelude::*;

use gldpc::ensemble::TannerGraph;
use gldpc::partition::{classify, expurgation_scan, is_possibly_bad, PartitionError};

proptest! {
    #[test]
    fn counts_obey_invariants(
        seed in 0u64..1000,
        c in 2usize..5,
        c1_off in 0usize..4,
        t in 1usize..3,
        set in proptest::collection::btree_set(0usize..60, 1..12),
    ) {
        let (n, d) = (60, 6);
        let c1 = 1 + c1_off % c;
        let g = TannerGraph::sample(n, c, d, seed).unwrap();
        let b: Vec<usize> = set.into_iter().collect();
        let w = classify(&g, &b, c1, t).unwrap();
        prop_assert!(w.counts().satisfies_invariants(n, c, d, c1, t));
        prop_assert_eq!(w.b_unsure.len() + w.b_good.len(), b.len());
        prop_assert_eq!(w.g_unsure.len() + w.g_good.len(), n - b.len());
        prop_assert_eq!(w.j_bad.len() + w.j_good.len(), g.num_checks());
    }
}

fn all_sets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    let mut all = Vec::new();
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &out {
            let from = s.last().map_or(0, |&v| v + 1);
            for v in from..n {
                let mut t = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        all.extend(next.iter().cloned());
        out = next;
    }
    all
}

#[test]
fn scan_finds_exactly_the_bad_sets() {
    for seed in 0..30 {
        let g = TannerGraph::sample(12, 3, 4, seed).unwrap();
        for c1 in 1..=3 {
            let mut expected: Vec<Vec<usize>> = all_sets(12, 3)
                .into_iter()
                .filter(|b| is_possibly_bad(&g, b, c1, 1).unwrap())
                .collect();
            // Size first, then colexicographic.
            expected.sort_by(|a, b| {
                a.len()
                    .cmp(&b.len())
                    .then_with(|| a.iter().rev().cmp(b.iter().rev()))
            });
            let got = expurgation_scan(&g, 3, c1, 1, u64::MAX).unwrap();
            assert_eq!(got, expected, "seed {seed}, c1 {c1}");
        }
    }
}

#[test]
fn double_edges_create_bad_singletons() {
    // Variable 0 sends both of its edges into check 0; with t = 1 that check
    // is overloaded by {0} alone, leaving 0 without a good check.
    let perm: Vec<u32> = vec![0, 1, 2, 4, 3, 8, 5, 9, 6, 10, 7, 11];
    let g = TannerGraph::from_permutation(6, 2, 4, perm).unwrap();
    assert!(!g.is_simple_at(0));
    assert!((1..6).all(|v| g.is_simple_at(v)));
    let w = classify(&g, &[0], 2, 1).unwrap();
    assert_eq!(w.j_bad, vec![0]);
    assert_eq!(w.b_unsure, vec![0]);
    assert!(w.is_possibly_bad());
    assert_eq!(expurgation_scan(&g, 1, 2, 1, 100).unwrap(), vec![vec![0]]);
}

#[test]
fn input_errors() {
    let g = TannerGraph::sample(12, 3, 4, 0).unwrap();
    assert_eq!(classify(&g, &[], 2, 1).unwrap_err(), PartitionError::EmptySet);
    assert!(matches!(classify(&g, &[12], 2, 1), Err(PartitionError::OutOfRange { .. })));
    assert!(matches!(classify(&g, &[3, 3], 2, 1), Err(PartitionError::Duplicate(3))));
    assert_eq!(expurgation_scan(&g, 0, 2, 1, 10).unwrap_err(), PartitionError::ZeroBMax);
    assert!(matches!(
        expurgation_scan(&g, 3, 2, 1, 100),
        Err(PartitionError::BudgetExceeded { .. })
    ));
}
