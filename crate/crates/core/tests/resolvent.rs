mod common;

use versal::resolvent::{build_resolvent, verify_resolvent};

#[test]
fn pinkham_generator_counts_per_level() {
    let (ideal, _) = common::corpus_ideal("pinkham");
    let r = build_resolvent(&ideal, 3, 4).unwrap();
    let counts: Vec<usize> = (1..=3).map(|l| r.level(l).count()).collect();
    assert_eq!(counts, vec![6, 8, 18]);
    assert!(r.level(2).all(|g| g.weight() == 3));
    assert!(r.level(3).all(|g| g.weight() == 4));
}

#[test]
fn corpus_resolvents_verify() {
    for (name, _) in common::corpus() {
        let (ideal, opts) = common::corpus_ideal(&name);
        let depth = opts.depth.unwrap_or(3);
        let w = opts.weight_bound.unwrap_or_else(|| ideal.default_weight_bound(depth));
        let r = build_resolvent(&ideal, depth, w).unwrap();
        let report = verify_resolvent(&r);
        assert!(report.passed(), "{name}: {:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn complete_intersections_have_no_higher_generators() {
    for name in ["a3", "cusp", "e6", "complete_intersection"] {
        let (ideal, _) = common::corpus_ideal(name);
        let r = build_resolvent(&ideal, 3, ideal.default_weight_bound(3)).unwrap();
        assert_eq!(r.max_level(), 1, "{name}");
    }
}
