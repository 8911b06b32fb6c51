use super::*;
use crate::oracle::{generate, AbstractTree, SplitPolicy};

fn level_one(degrees: &[u32]) -> AbstractTree {
    let d = degrees.iter().sum::<u32>() as usize;
    AbstractTree::from_levels(d, vec![degrees.iter().map(|&g| (0, 0, g)).collect()])
}

/// d = 3, level 1 = (2, 1). The degree-2 piece has one degree-2 child over
/// itself and two degree-1 children over the other piece.
fn critical_chain() -> AbstractTree {
    AbstractTree::from_levels(
        3,
        vec![
            vec![(0, 0, 2), (0, 0, 1)],
            vec![(0, 0, 2), (0, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
        ],
    )
}

#[test]
fn level_one_filled_from_below() {
    let t = level_one(&[2, 1]);
    let a = assign_symbols(&t).unwrap();
    assert_eq!(a.get(1, 0), &[0, 1]);
    assert_eq!(a.get(1, 1), &[2]);
    assert_eq!(a.get(0, 0), &[0, 1, 2]);
}

#[test]
fn univalent_level_one_is_a_bijection() {
    let t = level_one(&[1, 1, 1, 1]);
    let a = assign_symbols(&t).unwrap();
    for i in 0..4 {
        assert_eq!(a.get(1, i), &[i as u32]);
    }
    let coding = Coding::new(&t, &a);
    for j in 0..4u32 {
        let w = CylinderWord::new(vec![j], 4).unwrap();
        assert_eq!(coding.component(&w).unwrap(), j as usize);
    }
}

#[test]
fn sole_sibling_inherits_both_symbols() {
    let t = critical_chain();
    let a = assign_symbols(&t).unwrap();
    assert_eq!(a.get(2, 0), &[0, 1]);
    assert_eq!(a.get(2, 1), &[0]);
    assert_eq!(a.get(2, 2), &[1]);
    assert!(a.violations(&t).is_empty());
}

#[test]
fn critical_words_merge() {
    let t = critical_chain();
    let a = assign_symbols(&t).unwrap();
    let coding = Coding::new(&t, &a);
    let w0 = CylinderWord::new(vec![0, 1], 3).unwrap();
    let w1 = CylinderWord::new(vec![1, 1], 3).unwrap();
    assert_eq!(coding.component(&w0).unwrap(), coding.component(&w1).unwrap());
    let table = fibers(&coding, 2).unwrap();
    assert_eq!(table.counts(), vec![4, 1, 1, 2, 1]);
    let words: Vec<String> = table.words[0].iter().map(|w| w.to_string()).collect();
    assert_eq!(words, ["00", "01", "10", "11"]);
}

#[test]
fn empty_word_codes_the_root() {
    let t = critical_chain();
    let a = assign_symbols(&t).unwrap();
    let coding = Coding::new(&t, &a);
    assert_eq!(coding.component(&CylinderWord::empty()).unwrap(), 0);
    assert_eq!(CylinderWord::empty().to_string(), "()");
}

#[test]
fn word_operations() {
    let w = CylinderWord::new(vec![2, 0, 1], 3).unwrap();
    assert_eq!(w.shift().symbols(), &[0, 1]);
    assert_eq!(w.prefix().symbols(), &[2, 0]);
    assert!(CylinderWord::new(vec![3], 3).is_none());
    assert_eq!(CylinderWord::from_index(5, 3, 2).symbols(), &[1, 2]);
}

#[test]
fn fibers_partition_all_words() {
    let t = generate(11, 4, 4, SplitPolicy::Uniform, None);
    let a = assign_symbols(&t).unwrap();
    let coding = Coding::new(&t, &a);
    for k in 0..=4 {
        let table = fibers(&coding, k).unwrap();
        assert_eq!(table.counts().iter().sum::<u64>(), 4u64.pow(k as u32));
        for (w, count) in table.counts().iter().enumerate() {
            assert_eq!(*count, t.cumulative_degree(k, w));
        }
    }
}

#[test]
fn verification_passes_on_generated_trees() {
    for seed in 0..20 {
        let t = generate(seed, 3, 4, SplitPolicy::Uniform, None);
        let a = assign_symbols(&t).unwrap();
        let coding = Coding::new(&t, &a);
        let report = verify_semiconjugacy(&coding, 4).unwrap();
        assert!(report.passed(), "seed {seed}: {}", report.summary());
    }
}

#[test]
fn corrupted_assignment_is_caught() {
    let t = critical_chain();
    let a = assign_symbols(&t).unwrap();
    let bad = a.corrupted(&t, 2).expect("a level-2 sibling pair exists");
    assert!(!bad.violations(&t).is_empty());
    let coding = Coding::new(&t, &bad);
    let report = verify_semiconjugacy(&coding, 2).unwrap();
    assert!(!report.passed());
    assert!(report.checks.iter().any(|c| !c.passed && !c.counterexamples.is_empty()));
}

#[test]
fn assignment_is_deterministic() {
    let t = generate(5, 4, 5, SplitPolicy::Uniform, None);
    assert_eq!(assign_symbols(&t).unwrap(), assign_symbols(&t).unwrap());
}
