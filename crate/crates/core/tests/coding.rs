mod common;

use julia_shift::coding::{ChiStatus, CodingError, PointSpec};
use julia_shift::map_model::ExactComplex;
use julia_shift::puzzle_tree::locate;
use julia_shift::{assign_symbols, chi, fibers, verify_semiconjugacy, Coding, ComponentGraph, CylinderWord};

fn exact(re: &str) -> PointSpec {
    PointSpec::exact(ExactComplex::parse(re, "0").unwrap())
}

#[test]
fn quadratic_verification_at_depth_eight() {
    let tree = common::quadratic(8);
    let a = assign_symbols(&tree).unwrap();
    let coding = Coding::new(&tree, &a);
    let report = verify_semiconjugacy(&coding, 8).unwrap();
    assert_eq!(report.summary(), "5/5 checks pass, 256 cylinders");
    let table = fibers(&coding, 8).unwrap();
    assert!(table.counts().iter().all(|&c| c == 1));
}

#[test]
fn quadratic_cylinder_zero_one() {
    let tree = common::quadratic(2);
    let a = assign_symbols(&tree).unwrap();
    let coding = Coding::new(&tree, &a);
    let w = coding.component(&CylinderWord::new(vec![0, 1], 2).unwrap()).unwrap();
    let c = tree.component(2, w);
    assert_eq!((c.container, c.image), (Some(0), Some(1)));
    assert!(c.cover.bbox().unwrap().re_hi() < 0.0);
}

#[test]
fn cubic_verification_at_depth_six() {
    let tree = common::cubic(6);
    let a = assign_symbols(&tree).unwrap();
    assert!(a.violations(&tree).is_empty());
    let coding = Coding::new(&tree, &a);
    let report = verify_semiconjugacy(&coding, 6).unwrap();
    assert_eq!(report.summary(), "5/5 checks pass, 729 cylinders");
    let table = fibers(&coding, 6).unwrap();
    let counts = table.counts();
    assert_eq!(counts.iter().sum::<u64>(), 729);
    // merging really happens: some fiber has words with distinct first symbols
    assert!(table
        .words
        .iter()
        .any(|ws| ws.iter().any(|w| w.symbols()[0] != ws[0].symbols()[0])));
    for (i, c) in counts.iter().enumerate() {
        assert_eq!(*c, tree.cumulative_degree(6, i));
        assert!(*c <= 2);
    }
}

#[test]
fn cubic_critical_words_share_a_component() {
    let tree = common::cubic(3);
    let a = assign_symbols(&tree).unwrap();
    let coding = Coding::new(&tree, &a);
    let chain = locate(&tree, &ExactComplex::parse("1.5", "0").unwrap(), 3).unwrap();
    let crit = chain[1];
    let s = a.get(1, crit).to_vec();
    // the degree-1 piece around -3 comes first in canonical order
    assert_eq!(s, [1, 2]);
    let tail = coding.component(&CylinderWord::new(vec![s[0]], 3).unwrap()).unwrap();
    assert_eq!(tail, crit);
    // f(1.5) = -3, so the merged words end in the symbol of the other piece
    let other = a.get(1, 1 - crit)[0];
    let w0 = CylinderWord::new(vec![s[0], other], 3).unwrap();
    let w1 = CylinderWord::new(vec![s[1], other], 3).unwrap();
    assert_eq!(coding.component(&w0).unwrap(), chain[2]);
    assert_eq!(coding.component(&w0).unwrap(), coding.component(&w1).unwrap());
}

#[test]
fn corrupted_tree_assignment_fails() {
    let tree = common::cubic(3);
    let a = assign_symbols(&tree).unwrap();
    let bad = a.corrupted(&tree, 3).unwrap();
    let coding = Coding::new(&tree, &bad);
    let report = verify_semiconjugacy(&coding, 3).unwrap();
    assert!(!report.passed());
    let failing: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failing.contains(&"equivariance") || failing.contains(&"fiber_size"), "{failing:?}");
}

#[test]
fn chi_quadratic_is_one() {
    let tree = common::quadratic(4);
    for p in [exact("-2"), PointSpec::preimage(exact("-2"), (2.0, 0.0))] {
        let r = chi(&tree, &p, 20).unwrap();
        assert_eq!((r.value, r.status), (1, ChiStatus::Certified));
        assert!(r.hits.is_empty());
    }
}

#[test]
fn chi_cubic_critical_point() {
    let tree = common::cubic(2);
    let r = chi(&tree, &exact("1.5"), 20).unwrap();
    assert_eq!((r.value, r.status), (2, ChiStatus::Certified));
    assert_eq!(r.hits.len(), 1);
    assert_eq!(r.hits[0].local_degree, 2);
    let r = chi(&tree, &exact("-3"), 20).unwrap();
    assert_eq!((r.value, r.status), (1, ChiStatus::Certified));
}

#[test]
fn chi_cubic_preimages_of_critical_point() {
    let tree = common::cubic(2);
    for near in [(-2.75, 0.0), (2.41, 0.0), (0.34, 0.0)] {
        let p = PointSpec::preimage(exact("1.5"), near);
        let r = chi(&tree, &p, 20).unwrap();
        assert_eq!((r.value, r.status), (2, ChiStatus::Certified), "{near:?}");
        assert_eq!(r.hits[0].step, 1);
        // second preimage level
        let q = PointSpec::preimage(p, near);
        assert_eq!(chi(&tree, &q, 20).unwrap().value, 2);
    }
}

#[test]
fn chi_escaping_point() {
    let tree = common::cubic(2);
    let err = chi(&tree, &exact("0"), 20).unwrap_err();
    assert!(matches!(err, CodingError::Tree(_)), "{err}");
}
