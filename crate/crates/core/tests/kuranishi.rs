mod common;

use versal::kuranishi::{semiuniversal, verify_flatness, Lifter};
use versal::resolvent::build_resolvent;
use versal::tangent::tangent_cohomology;

#[test]
fn pinkham_second_order_obstruction_spans_t2() {
    let (ideal, _) = common::corpus_ideal("pinkham");
    let r = build_resolvent(&ideal, 3, 4).unwrap();
    let t1 = tangent_cohomology(&r, 1, 4).unwrap();
    let t2 = tangent_cohomology(&r, 2, 4).unwrap();
    let mut lifter = Lifter::new(&r, &t1, &t2).unwrap();
    let step = lifter.lift_step().unwrap();
    assert_eq!(step.order, 2);
    assert!(step.obstruction_terms > 0);
    assert_eq!(lifter.kuranishi.components.len(), 3);
    assert!(lifter.kuranishi.components.iter().all(|k| !k.is_zero()));
    assert!(lifter.log.iter().all(|l| l.identity_holds));
}

#[test]
fn pinkham_flat_modulo_quadrics_at_order_three() {
    let (ideal, _) = common::corpus_ideal("pinkham");
    let (r, res) = semiuniversal(&ideal, 3, 4, 3).unwrap();
    assert!(verify_flatness(&res.perturbation, &res.kuranishi, &res.parameters, &r, 3).passed());
}

#[test]
fn dropping_a_correction_is_located() {
    let (ideal, _) = common::corpus_ideal("pinkham");
    let (r, mut res) = semiuniversal(&ideal, 3, 4, 3).unwrap();
    let second: Vec<_> = res.perturbation.delta.keys().filter(|m| m.degree() == 2).cloned().collect();
    assert!(!second.is_empty());
    res.perturbation.delta.remove(&second[0]);
    let report = verify_flatness(&res.perturbation, &res.kuranishi, &res.parameters, &r, 3);
    let witness = report.witness.expect("flatness must fail");
    assert!(r.generators().iter().any(|g| g.name == witness.generator));
    assert!(witness.monomial.starts_with('t'));
}

#[test]
fn kuranishi_components_have_no_constant_or_linear_part() {
    for (name, _) in common::corpus() {
        let (ideal, opts) = common::corpus_ideal(&name);
        let depth = opts.depth.unwrap_or(3);
        let w = opts.weight_bound.unwrap_or_else(|| ideal.default_weight_bound(depth));
        let (_, res) = semiuniversal(&ideal, depth, w, opts.order.unwrap_or(3)).unwrap();
        assert_eq!(res.parameters.len(), res.t1.dim(), "{name}");
        assert_eq!(res.kuranishi.components.len(), res.t2.dim(), "{name}");
        for k in &res.kuranishi.components {
            assert!(k.terms().all(|(m, _)| m.degree() >= 2), "{name}");
        }
        // every perturbation term and Kuranishi coefficient has total weight zero
        for (m, d) in &res.perturbation.delta {
            assert_eq!(m.weight() + d.weight, 0, "{name}");
        }
        for (k, (w2, _)) in res.kuranishi.components.iter().zip(res.t2.iter()) {
            assert!(k.terms().all(|(m, _)| m.weight() + w2 == 0), "{name}");
        }
    }
}
