use gldpc::codes::CodeSpec;
use gldpc::ensemble::{EnsembleError, EnsembleParams, GraphFileError, TannerGraph};

fn with_crc(body: &str) -> String {
    format!("{body}{:08x}\n", crc32fast::hash(body.as_bytes()))
}

#[test]
fn socket_map_is_uniform() {
    // N = 4, c = 2, d = 2: eight sockets. Where socket 0 lands should be
    // uniform over all eight check sockets.
    let trials = 16_000;
    let mut counts = [0usize; 8];
    for seed in 0..trials {
        let g = TannerGraph::sample(4, 2, 2, seed).unwrap();
        counts[g.permutation()[0] as usize] += 1;
    }
    let expected = trials as f64 / 8.0;
    let chi2: f64 = counts
        .iter()
        .map(|&k| (k as f64 - expected).powi(2) / expected)
        .sum();
    // 0.999 quantile of chi-square with 7 degrees of freedom.
    assert!(chi2 < 24.32, "chi-square {chi2} for counts {counts:?}");
}

#[test]
fn adjacency_is_consistent() {
    let g = TannerGraph::sample(90, 4, 12, 3).unwrap();
    assert_eq!(g.num_checks(), 30);
    let mut degree = vec![0; 30];
    for v in 0..90 {
        for &j in g.var_neighbors(v) {
            degree[j as usize] += 1;
            let at_check = g.check_neighbors(j as usize).iter().filter(|&&u| u as usize == v).count();
            let at_var = g.var_neighbors(v).iter().filter(|&&k| k == j).count();
            assert_eq!(at_check, at_var);
        }
    }
    assert!(degree.iter().all(|&k| k == 12));
}

#[test]
fn same_seed_same_graph() {
    let a = TannerGraph::sample(300, 4, 30, 77).unwrap();
    let b = TannerGraph::sample(300, 4, 30, 77).unwrap();
    let c = TannerGraph::sample(300, 4, 30, 78).unwrap();
    assert_eq!(a.permutation(), b.permutation());
    assert_ne!(a.permutation(), c.permutation());
}

#[test]
fn graph_file_round_trip() {
    let g = TannerGraph::sample(60, 3, 9, 5).unwrap();
    let text = g.to_text();
    assert!(text.starts_with("GLDPC-GRAPH v1\n60 3 9\n"));
    let back = TannerGraph::parse(&text).unwrap();
    assert_eq!(back.permutation(), g.permutation());
    assert_eq!(back.to_text(), text);
}

#[test]
fn graph_file_errors() {
    let g = TannerGraph::sample(6, 2, 3, 1).unwrap();
    let text = g.to_text();

    let cut = &text[..text.len() - 10];
    assert!(TannerGraph::parse(cut).is_err());
    assert!(matches!(
        TannerGraph::parse("GLDPC-GRAPH v1\n6 2 3\n"),
        Err(GraphFileError::Truncated(_))
    ));

    let flipped = text.replacen("6 2 3", "6 2 3 ", 1);
    assert!(matches!(
        TannerGraph::parse(&flipped),
        Err(GraphFileError::ChecksumMismatch { .. })
    ));

    let wrong_magic = with_crc("GRAPH v0\n6 2 3\n0 1 2 3 4 5 6 7 8 9 10 11\n");
    assert!(matches!(TannerGraph::parse(&wrong_magic), Err(GraphFileError::BadHeader(_))));

    let not_divisible = with_crc("GLDPC-GRAPH v1\n5 2 3\n0 1 2 3 4 5 6 7 8 9\n");
    assert!(matches!(
        TannerGraph::parse(&not_divisible),
        Err(GraphFileError::Invalid(EnsembleError::NotDivisible { nc: 10, d: 3 }))
    ));

    let short = with_crc("GLDPC-GRAPH v1\n6 2 3\n0 1 2 3 4 5 6 7 8 9 10\n");
    assert!(matches!(TannerGraph::parse(&short), Err(GraphFileError::Truncated(_))));

    let repeated = with_crc("GLDPC-GRAPH v1\n6 2 3\n0 1 2 3 4 5 6 7 8 9 10 10\n");
    assert!(matches!(
        TannerGraph::parse(&repeated),
        Err(GraphFileError::Invalid(EnsembleError::NotPermutation(12)))
    ));

    let junk = with_crc("GLDPC-GRAPH v1\n6 2 x\n0 1 2 3 4 5 6 7 8 9 10 11\n");
    assert!(matches!(TannerGraph::parse(&junk), Err(GraphFileError::Malformed(_))));
}

#[test]
fn parameter_validation() {
    let rs = CodeSpec::Rs { d: 30, k: 24, q: 31 };
    assert!(EnsembleParams::new(3000, 4, rs, 3).is_ok());
    assert!(EnsembleParams::new(3001, 4, rs, 3).is_err());
    assert!(EnsembleParams::new(3000, 4, rs, 2).is_err());
    assert!(EnsembleParams::new(3000, 4, rs, 5).is_err());
    let h = CodeSpec::Hamming { m: 3 };
    assert!(EnsembleParams::new(70, 3, h, 2).is_ok());
    assert!(EnsembleParams::new(70, 3, h, 1).is_ok());
}
