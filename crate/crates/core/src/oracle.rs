//! Geometry-free component trees and a brute-force fiber count used to
//! cross-check the coding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coding::{assign_symbols, fibers, verify_semiconjugacy, word_count, Coding, SymbolAssignment};
use crate::graph::{structure_violations, ComponentGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{d}^{k} words exceed the enumeration budget")]
    BudgetExceeded { d: usize, k: usize },
    #[error("level {requested} requested but the tree has depth {depth}")]
    DepthOutOfRange { requested: usize, depth: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractNode {
    pub container: Option<usize>,
    pub image: Option<usize>,
    pub local_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractTree {
    pub alphabet_size: usize,
    pub levels: Vec<Vec<AbstractNode>>,
}

const ROOT: AbstractNode = AbstractNode {
    container: None,
    image: None,
    local_degree: 1,
};

impl AbstractTree {
    /// Builds a tree from `(container, image, local_degree)` triples for
    /// levels `1..`; the root is added.
    pub fn from_levels(d: usize, levels: Vec<Vec<(usize, usize, u32)>>) -> Self {
        let mut out = vec![vec![ROOT]];
        for lvl in levels {
            out.push(
                lvl.into_iter()
                    .map(|(c, v, deg)| AbstractNode {
                        container: Some(c),
                        image: Some(v),
                        local_degree: deg,
                    })
                    .collect(),
            );
        }
        Self {
            alphabet_size: d,
            levels: out,
        }
    }

    /// Drops everything but the combinatorics.
    pub fn from_graph<G: ComponentGraph + ?Sized>(g: &G) -> Self {
        let levels = (0..=g.depth())
            .map(|k| {
                (0..g.level_len(k))
                    .map(|i| AbstractNode {
                        container: g.container(k, i),
                        image: g.image(k, i),
                        local_degree: g.local_degree(k, i),
                    })
                    .collect()
            })
            .collect();
        Self {
            alphabet_size: g.alphabet_size(),
            levels,
        }
    }
}

impl ComponentGraph for AbstractTree {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    fn level_len(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    fn container(&self, level: usize, index: usize) -> Option<usize> {
        self.levels[level][index].container
    }

    fn image(&self, level: usize, index: usize) -> Option<usize> {
        self.levels[level][index].image
    }

    fn local_degree(&self, level: usize, index: usize) -> u32 {
        self.levels[level][index].local_degree
    }

    fn contains_critical(&self, level: usize, index: usize) -> bool {
        level > 0 && self.levels[level][index].local_degree >= 2
    }
}

/// How a degree is split among children.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitPolicy {
    /// Uniform over compositions.
    Uniform,
    /// Each of the `n - 1` gaps is cut with this probability.
    Biased { cut_probability: f64 },
    /// All parts 1.
    Finest,
    /// A single part.
    Coarsest,
}

impl SplitPolicy {
    fn cut_probability(self) -> f64 {
        match self {
            SplitPolicy::Uniform => 0.5,
            SplitPolicy::Biased { cut_probability } => cut_probability.clamp(0.0, 1.0),
            SplitPolicy::Finest => 1.0,
            SplitPolicy::Coarsest => 0.0,
        }
    }
}

fn composition(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Vec<u32> {
    let mut parts = Vec::new();
    let mut run = 1;
    for _ in 1..n {
        if rng.gen_bool(p) {
            parts.push(run);
            run = 1;
        } else {
            run += 1;
        }
    }
    parts.push(run);
    parts
}

/// A random admissible tree. `level_one` fixes the first split; it must
/// sum to `d` with at least two parts. Without it the split is drawn
/// until it has at least two parts.
pub fn generate(
    seed: u64,
    d: usize,
    depth: usize,
    policy: SplitPolicy,
    level_one: Option<&[u32]>,
) -> AbstractTree {
    assert!(d >= 2 && depth >= 1, "need d >= 2 and depth >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = policy.cut_probability();
    let first: Vec<u32> = match level_one {
        Some(parts) => {
            assert!(parts.len() >= 2 && parts.iter().sum::<u32>() as usize == d);
            parts.to_vec()
        }
        None => loop {
            // two parts are forced at level one, so never cut with p = 0
            let c = composition(&mut rng, d as u32, p.max(1.0 / d as f64));
            if c.len() >= 2 {
                break c;
            }
        },
    };
    let mut levels = vec![vec![ROOT]];
    levels.push(
        first
            .into_iter()
            .map(|deg| AbstractNode {
                container: Some(0),
                image: Some(0),
                local_degree: deg,
            })
            .collect(),
    );
    for k in 2..=depth {
        let prev = &levels[k - 1];
        let mut next = Vec::new();
        for (p_idx, parent) in prev.iter().enumerate() {
            let img = parent.image.expect("non-root");
            for (v, cand) in prev.iter().enumerate() {
                if cand.container != Some(img) {
                    continue;
                }
                for deg in composition(&mut rng, parent.local_degree, p) {
                    next.push(AbstractNode {
                        container: Some(p_idx),
                        image: Some(v),
                        local_degree: deg,
                    });
                }
            }
        }
        levels.push(next);
    }
    AbstractTree {
        alphabet_size: d,
        levels,
    }
}

/// Fiber sizes at level `k` by filling one table per word length: the
/// component of `ε₁…ε_j` is the child of the prefix component that maps
/// onto the shift component and carries `ε₁`.
pub fn brute_force_fibers(
    tree: &AbstractTree,
    assignment: &SymbolAssignment,
    k: usize,
) -> Result<Vec<u64>, OracleError> {
    if k > tree.depth() {
        return Err(OracleError::DepthOutOfRange {
            requested: k,
            depth: tree.depth(),
        });
    }
    let d = tree.alphabet_size;
    if word_count(d, k).is_none() {
        return Err(OracleError::BudgetExceeded { d, k });
    }
    let mut table: Vec<Option<usize>> = vec![Some(0)];
    for j in 1..=k {
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); tree.levels[j - 1].len()];
        for (w, node) in tree.levels[j].iter().enumerate() {
            if let Some(c) = node.container {
                children[c].push(w);
            }
        }
        let tail = table.len();
        let mut next = Vec::with_capacity(tail * d);
        for idx in 0..tail * d {
            let first = (idx / tail) as u32;
            let found = match (table[idx / d], table[idx % tail]) {
                (Some(parent), Some(img)) => {
                    let mut hit = children[parent].iter().copied().filter(|&w| {
                        tree.levels[j][w].image == Some(img) && assignment.sets[j][w].contains(&first)
                    });
                    match (hit.next(), hit.next()) {
                        (Some(w), None) => Some(w),
                        _ => None,
                    }
                }
                _ => None,
            };
            next.push(found);
        }
        table = next;
    }
    let mut counts = vec![0u64; tree.levels[k].len()];
    for w in table.into_iter().flatten() {
        counts[w] += 1;
    }
    Ok(counts)
}

/// Outcome of a batch of random oracle cases.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<String>,
}

/// Parameters of a random case batch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRun {
    pub seed: u64,
    pub cases: usize,
    pub degrees: Vec<usize>,
    pub max_depth: usize,
}

/// All checks on one tree. Returns the failure messages.
pub fn check_tree(tree: &AbstractTree) -> Vec<String> {
    let mut out = structure_violations(tree);
    let assignment = match assign_symbols(tree) {
        Ok(a) => a,
        Err(e) => {
            out.push(e.to_string());
            return out;
        }
    };
    out.extend(assignment.violations(tree));
    let coding = Coding::new(tree, &assignment);
    let univalent = tree.levels.iter().flatten().all(|n| n.local_degree == 1);
    for k in 0..=tree.depth() {
        let brute = match brute_force_fibers(tree, &assignment, k) {
            Ok(b) => b,
            Err(e) => {
                out.push(e.to_string());
                continue;
            }
        };
        match fibers(&coding, k) {
            Ok(table) => {
                if table.counts() != brute {
                    out.push(format!("level {k}: fiber counts differ from brute force"));
                }
                if univalent && brute.iter().any(|&c| c != 1) {
                    out.push(format!("level {k}: univalent tree has a non-singleton fiber"));
                }
            }
            Err(e) => out.push(format!("level {k}: {e}")),
        }
        match verify_semiconjugacy(&coding, k) {
            Ok(r) if r.passed() => {}
            Ok(r) => out.push(format!("level {k}: {}", r.summary())),
            Err(e) => out.push(format!("level {k}: {e}")),
        }
    }
    out
}

/// Runs `run.cases` seeded cases, cycling through the split policies.
pub fn run_cases(run: &OracleRun) -> OracleSummary {
    use rayon::prelude::*;
    let policies = [
        SplitPolicy::Uniform,
        SplitPolicy::Biased {
            cut_probability: 0.8,
        },
        SplitPolicy::Biased {
            cut_probability: 0.2,
        },
        SplitPolicy::Finest,
        SplitPolicy::Coarsest,
    ];
    let results: Vec<Vec<String>> = (0..run.cases)
        .into_par_iter()
        .map(|i| {
            let seed = run.seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let d = run.degrees[rng.gen_range(0..run.degrees.len())];
            let depth = rng.gen_range(1..=run.max_depth.max(1));
            let policy = policies[i % policies.len()];
            let tree = generate(seed, d, depth, policy, None);
            check_tree(&tree)
                .into_iter()
                .map(|m| format!("case {i} (seed {seed}, d {d}, depth {depth}, {policy:?}): {m}"))
                .collect()
        })
        .collect();
    let passed = results.iter().filter(|r| r.is_empty()).count();
    OracleSummary {
        cases: run.cases,
        passed,
        failures: results.into_iter().flatten().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_binary_split_is_full_binary_tree() {
        let t = generate(1, 2, 5, SplitPolicy::Finest, None);
        for k in 0..=5 {
            assert_eq!(t.levels[k].len(), 1 << k);
        }
        let a = assign_symbols(&t).unwrap();
        assert!(brute_force_fibers(&t, &a, 5).unwrap().iter().all(|&c| c == 1));
        assert_eq!(brute_force_fibers(&t, &a, 5).unwrap().len(), 32);
    }

    #[test]
    fn persistent_critical_chain() {
        let t = generate(7, 3, 4, SplitPolicy::Coarsest, Some(&[2, 1]));
        assert!(structure_violations(&t).is_empty());
        // the degree-2 piece keeps a degree-2 child over each target
        let crit: Vec<u32> = t.levels[4].iter().map(|n| n.local_degree).filter(|&x| x > 1).collect();
        assert!(!crit.is_empty());
        assert!(crit.iter().all(|&x| x == 2));
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate(42, 4, 5, SplitPolicy::Uniform, None);
        let b = generate(42, 4, 5, SplitPolicy::Uniform, None);
        assert_eq!(a, b);
        assert_ne!(a, generate(43, 4, 5, SplitPolicy::Uniform, None));
    }

    #[test]
    fn hand_built_critical_chain_counts() {
        // level 1: A (degree 2, symbols {0,1}) and B (degree 1, symbol {2})
        // level 2: W1 in A over A (degree 2), two univalent pieces in A
        // over B, then the pieces of B over A and over B
        let t = AbstractTree::from_levels(
            3,
            vec![
                vec![(0, 0, 2), (0, 0, 1)],
                vec![(0, 0, 2), (0, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
            ],
        );
        assert!(structure_violations(&t).is_empty());
        let a = assign_symbols(&t).unwrap();
        assert_eq!(a.get(2, 0), &[0, 1]);
        let counts = brute_force_fibers(&t, &a, 2).unwrap();
        assert_eq!(counts, vec![4, 1, 1, 2, 1]);
        assert_eq!(counts.iter().sum::<u64>(), 9);
    }

    #[test]
    fn level_past_depth_is_rejected() {
        let t = generate(1, 4, 1, SplitPolicy::Finest, None);
        let a = assign_symbols(&t).unwrap();
        assert!(brute_force_fibers(&t, &a, 1).is_ok());
        assert!(matches!(
            brute_force_fibers(&t, &a, 3),
            Err(OracleError::DepthOutOfRange { .. })
        ));
    }

    #[test]
    fn small_batch_passes() {
        let s = run_cases(&OracleRun {
            seed: 3,
            cases: 40,
            degrees: vec![2, 3, 4],
            max_depth: 4,
        });
        assert_eq!(s.passed, 40, "{:?}", s.failures);
    }
}
