use julia_shift::graph::structure_violations;
use julia_shift::oracle::{brute_force_fibers, check_tree, generate, run_cases, OracleRun, SplitPolicy};
use julia_shift::{assign_symbols, fibers, Coding};
use proptest::prelude::*;

#[test]
fn batch_of_mixed_degrees_passes() {
    let summary = run_cases(&OracleRun {
        seed: 2024,
        cases: 200,
        degrees: vec![2, 3, 4],
        max_depth: 5,
    });
    assert_eq!(summary.passed, 200, "{:?}", summary.failures);
}

#[test]
fn batches_are_reproducible() {
    let run = OracleRun {
        seed: 9,
        cases: 30,
        degrees: vec![3],
        max_depth: 4,
    };
    assert_eq!(run_cases(&run), run_cases(&run));
}

#[test]
fn fiber_counts_sum_to_all_words() {
    let t = generate(3, 4, 4, SplitPolicy::Biased { cut_probability: 0.3 }, None);
    let a = assign_symbols(&t).unwrap();
    for k in 0..=4 {
        let counts = brute_force_fibers(&t, &a, k).unwrap();
        assert_eq!(counts.iter().sum::<u64>(), 4u64.pow(k as u32));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_trees_are_admissible(seed in any::<u64>(), d in 2usize..=5, depth in 1usize..=4, p in 0.0f64..=1.0) {
        let t = generate(seed, d, depth, SplitPolicy::Biased { cut_probability: p }, None);
        prop_assert!(structure_violations(&t).is_empty());
    }

    #[test]
    fn oracle_matches_fibers(seed in any::<u64>(), d in 2usize..=4, depth in 1usize..=5) {
        let t = generate(seed, d, depth, SplitPolicy::Uniform, None);
        let a = assign_symbols(&t).unwrap();
        let coding = Coding::new(&t, &a);
        for k in 0..=depth {
            prop_assert_eq!(fibers(&coding, k).unwrap().counts(), brute_force_fibers(&t, &a, k).unwrap());
        }
        prop_assert!(check_tree(&t).is_empty());
    }
}
