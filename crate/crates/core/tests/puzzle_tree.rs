mod common;

use julia_shift::graph::structure_violations;
use julia_shift::map_model::{DomainDisk, ExactComplex, PolynomialMap};
use julia_shift::puzzle_tree::{cantor_diagnostic, locate, TreeError};
use julia_shift::{build_tree, ResolutionPolicy};

#[test]
fn quadratic_depth_two() {
    let tree = common::quadratic(2);
    let sizes: Vec<usize> = tree.levels().iter().map(|l| l.len()).collect();
    assert_eq!(sizes, [1, 2, 4]);
    for k in 1..=2 {
        for c in tree.level(k) {
            assert_eq!((c.local_degree, c.cumulative_degree), (1, 1));
        }
    }
    assert!(structure_violations(&tree).is_empty());
}

#[test]
fn quadratic_level_one_near_root_six() {
    let tree = common::quadratic(1);
    let l1 = tree.level(1);
    assert_eq!(l1.len(), 2);
    let s = 6f64.sqrt();
    assert!(l1[0].cover.bbox().unwrap().contains_point(-s, 0.0));
    assert!(l1[1].cover.bbox().unwrap().contains_point(s, 0.0));
    assert!(l1.iter().all(|c| c.image == Some(0) && c.local_degree == 1));
    assert!(tree.restriction().hypothesis_ok);
}

#[test]
fn cubic_level_one_degrees() {
    let tree = common::cubic(1);
    let mut degrees: Vec<u32> = tree.level(1).iter().map(|c| c.local_degree).collect();
    degrees.sort_unstable();
    assert_eq!(degrees, [1, 2]);
    assert_eq!(tree.restriction().n_components, 2);
}

#[test]
fn locate_fixed_point() {
    let tree = common::quadratic(5);
    let chain = locate(&tree, &ExactComplex::parse("-2", "0").unwrap(), 5).unwrap();
    assert_eq!(chain.len(), 6);
    for (k, w) in chain.iter().enumerate().skip(1) {
        let c = tree.component(k, *w);
        assert_eq!(c.container, Some(chain[k - 1]));
        assert!(c.cover.bbox().unwrap().contains_point(-2.0, 0.0));
    }
}

#[test]
fn locate_outside_disk() {
    let tree = common::quadratic(2);
    let err = locate(&tree, &ExactComplex::parse("5", "0").unwrap(), 2).unwrap_err();
    assert!(matches!(err, TreeError::NotInCover { .. }));
    let err = locate(&tree, &ExactComplex::parse("0", "0").unwrap(), 3).unwrap_err();
    assert!(matches!(err, TreeError::LevelOutOfRange { .. }));
}

#[test]
fn locate_cubic_critical_point() {
    let tree = common::cubic(4);
    let chain = locate(&tree, &ExactComplex::parse("1.5", "0").unwrap(), 4).unwrap();
    for (k, w) in chain.iter().enumerate().skip(1) {
        let c = tree.component(k, *w);
        assert_eq!(c.local_degree, 2);
        assert!(!c.contains_critical.is_empty());
    }
}

#[test]
fn cantor_diagnostic_depth_zero() {
    let tree = common::quadratic(0);
    let diag = cantor_diagnostic(&tree);
    assert_eq!(diag.max_diameters.len(), 1);
    assert!(diag.max_diameters[0] >= 8.0);
}

#[test]
fn connected_julia_set_is_rejected() {
    let map = PolynomialMap::from_real_decimals(&["0", "0", "1"]).unwrap();
    let disk = DomainDisk::centered("2").unwrap();
    let err = build_tree(&map, &disk, 2, &ResolutionPolicy::default()).unwrap_err();
    assert!(matches!(err, TreeError::HypothesisViolation { .. }), "{err}");
}

#[test]
fn tiny_budget_is_reported() {
    let map = PolynomialMap::from_real_decimals(&["-6", "0", "1"]).unwrap();
    let disk = DomainDisk::centered("4").unwrap();
    let policy = ResolutionPolicy {
        max_boxes: 50,
        ..Default::default()
    };
    let err = build_tree(&map, &disk, 3, &policy).unwrap_err();
    assert!(matches!(err, TreeError::ResolutionExceeded(_)), "{err}");
}

#[test]
fn build_is_deterministic() {
    let a = common::quadratic(4);
    let b = common::quadratic(4);
    assert_eq!(a.levels(), b.levels());
    assert_eq!(
        julia_shift::export::tree_json(&a),
        julia_shift::export::tree_json(&b)
    );
}
