//! Finite-depth shift coding of a component tree.
//!
//! A symbol set `S(W)` is attached to every component; the cylinder map
//! `c` then sends a word `ε₁…ε_k` to the unique level-`k` component `W`
//! with `image(W) = c(ε₂…ε_k)` and `ε₁ ∈ S(W)`.

mod chi;
mod verify;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chi::{chi, ChiResult, ChiStatus, CriticalHit, PointSpec};
pub use verify::{verify_semiconjugacy, CheckResult, VerificationReport};

use crate::graph::ComponentGraph;
use crate::puzzle_tree::TreeError;

/// Words are enumerated only up to this many per level.
pub const MAX_WORDS: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodingError {
    #[error("inconsistent tree: {0}")]
    InconsistentTree(String),
    #[error("no component codes the word {0}")]
    NoComponent(CylinderWord),
    #[error("several components code the word {0}")]
    Ambiguous(CylinderWord),
    #[error("level {requested} requested but the tree has depth {depth}")]
    DepthOutOfRange { requested: usize, depth: usize },
    #[error("{words} words exceed the enumeration budget")]
    TooManyWords { words: u64 },
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("chi value {value} exceeds the bound {bound}")]
    BoundViolated { value: u64, bound: u64 },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A finite word `ε₁…ε_k` over `{0,…,d−1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CylinderWord(pub Vec<u32>);

impl CylinderWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Checks the alphabet bound.
    pub fn new(symbols: Vec<u32>, d: usize) -> Option<Self> {
        symbols
            .iter()
            .all(|&s| (s as usize) < d)
            .then_some(Self(symbols))
    }

    /// The `index`-th word of length `k` in lexicographic order.
    pub fn from_index(mut index: u64, d: usize, k: usize) -> Self {
        let mut out = vec![0u32; k];
        for slot in out.iter_mut().rev() {
            *slot = (index % d as u64) as u32;
            index /= d as u64;
        }
        Self(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    /// `σ(w)`: drops the first symbol.
    pub fn shift(&self) -> Self {
        Self(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    /// Drops the last symbol.
    pub fn prefix(&self) -> Self {
        let n = self.0.len().saturating_sub(1);
        Self(self.0[..n].to_vec())
    }
}

impl fmt::Display for CylinderWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

/// `d^k`, or `None` past [`MAX_WORDS`].
pub fn word_count(d: usize, k: usize) -> Option<u64> {
    let mut n: u64 = 1;
    for _ in 0..k {
        n = n.checked_mul(d as u64)?;
        if n > MAX_WORDS {
            return None;
        }
    }
    Some(n)
}

/// `S(W)` for every component, indexed `[level][component]`; each set is
/// sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolAssignment {
    pub alphabet_size: usize,
    pub sets: Vec<Vec<Vec<u32>>>,
}

impl SymbolAssignment {
    pub fn get(&self, level: usize, index: usize) -> &[u32] {
        &self.sets[level][index]
    }

    pub fn depth(&self) -> usize {
        self.sets.len() - 1
    }

    /// Size, nesting and partition invariants. Empty when all hold.
    pub fn violations<G: ComponentGraph + ?Sized>(&self, g: &G) -> Vec<String> {
        let d = self.alphabet_size;
        let mut out = Vec::new();
        for k in 1..self.sets.len() {
            let mut cover: Vec<Vec<u32>> = vec![vec![0; d]; g.level_len(k - 1)];
            for (i, set) in self.sets[k].iter().enumerate() {
                if set.len() != g.local_degree(k, i) as usize {
                    out.push(format!(
                        "|S({k},{i})| = {} but local degree is {}",
                        set.len(),
                        g.local_degree(k, i)
                    ));
                }
                if let Some(c) = g.container(k, i) {
                    let parent = &self.sets[k - 1][c];
                    if let Some(s) = set.iter().find(|s| !parent.contains(s)) {
                        out.push(format!("symbol {s} of S({k},{i}) is not in S({},{c})", k - 1));
                    }
                }
                if let Some(v) = g.image(k, i) {
                    for &s in set {
                        if (s as usize) < d {
                            cover[v][s as usize] += 1;
                        }
                    }
                }
            }
            for (v, counts) in cover.iter().enumerate() {
                if let Some(s) = counts.iter().position(|&n| n != 1) {
                    out.push(format!(
                        "symbol {s} appears {} times over the preimages of ({},{v})",
                        counts[s],
                        k - 1
                    ));
                }
            }
        }
        out
    }

    /// A copy with one symbol of a level-`k` set replaced by a symbol of a
    /// sibling with the same image, which breaks the partition invariant.
    /// `None` when level `k` has no such pair.
    pub fn corrupted<G: ComponentGraph + ?Sized>(&self, g: &G, k: usize) -> Option<Self> {
        let n = g.level_len(k);
        for a in 0..n {
            for b in 0..n {
                if a != b && g.image(k, a) == g.image(k, b) {
                    let mut out = self.clone();
                    let stolen = self.sets[k][b][0];
                    let set = &mut out.sets[k][a];
                    let last = set.len() - 1;
                    set[last] = stolen;
                    set.sort_unstable();
                    return Some(out);
                }
            }
        }
        None
    }
}

/// Builds `S` level by level: the children of `P` mapping onto `V` split
/// `S(P)` into consecutive ascending runs sized by their local degrees,
/// in component order.
pub fn assign_symbols<G: ComponentGraph + ?Sized>(g: &G) -> Result<SymbolAssignment, CodingError> {
    let d = g.alphabet_size();
    let mut sets: Vec<Vec<Vec<u32>>> = vec![vec![(0..d as u32).collect()]];
    for k in 1..=g.depth() {
        let mut level: Vec<Option<Vec<u32>>> = vec![None; g.level_len(k)];
        for (p, pool) in sets[k - 1].iter().enumerate() {
            let targets: Vec<usize> = match g.image(k - 1, p) {
                None => vec![0],
                Some(img) => (0..g.level_len(k - 1))
                    .filter(|&v| g.container(k - 1, v) == Some(img))
                    .collect(),
            };
            for v in targets {
                let kids: Vec<usize> = (0..g.level_len(k))
                    .filter(|&w| g.container(k, w) == Some(p) && g.image(k, w) == Some(v))
                    .collect();
                let total: usize = kids.iter().map(|&w| g.local_degree(k, w) as usize).sum();
                if total != pool.len() {
                    return Err(CodingError::InconsistentTree(format!(
                        "children of ({},{p}) over ({},{v}) have total degree {total}, expected {}",
                        k - 1,
                        k - 1,
                        pool.len()
                    )));
                }
                let mut at = 0;
                for w in kids {
                    let n = g.local_degree(k, w) as usize;
                    level[w] = Some(pool[at..at + n].to_vec());
                    at += n;
                }
            }
        }
        let level: Vec<Vec<u32>> = level
            .into_iter()
            .enumerate()
            .map(|(w, s)| {
                s.ok_or_else(|| {
                    CodingError::InconsistentTree(format!(
                        "component ({k},{w}) maps outside the image of its parent"
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        sets.push(level);
    }
    Ok(SymbolAssignment {
        alphabet_size: d,
        sets,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Slot {
    Empty,
    One(usize),
    Many,
}

/// Lookup `(level, V, symbol) -> W` for the cylinder map.
pub struct Coding<'a, G: ComponentGraph + ?Sized> {
    graph: &'a G,
    assignment: &'a SymbolAssignment,
    index: Vec<Vec<Slot>>,
}

impl<'a, G: ComponentGraph + ?Sized + Sync> Coding<'a, G> {
    pub fn new(graph: &'a G, assignment: &'a SymbolAssignment) -> Self {
        let d = graph.alphabet_size();
        let mut index = vec![vec![Slot::Empty; d]];
        for k in 1..assignment.sets.len().min(graph.depth() + 1) {
            let mut table = vec![Slot::Empty; graph.level_len(k - 1) * d];
            for (w, set) in assignment.sets[k].iter().enumerate() {
                let Some(v) = graph.image(k, w) else { continue };
                for &s in set {
                    if (s as usize) >= d {
                        continue;
                    }
                    let slot = &mut table[v * d + s as usize];
                    *slot = match *slot {
                        Slot::Empty => Slot::One(w),
                        Slot::One(x) if x == w => Slot::One(w),
                        _ => Slot::Many,
                    };
                }
            }
            index.push(table);
        }
        Self {
            graph,
            assignment,
            index,
        }
    }

    pub fn graph(&self) -> &G {
        self.graph
    }

    pub fn assignment(&self) -> &SymbolAssignment {
        self.assignment
    }

    pub fn alphabet_size(&self) -> usize {
        self.graph.alphabet_size()
    }

    pub fn depth(&self) -> usize {
        self.index.len() - 1
    }

    /// `c(w)`, as an index into level `|w|`.
    pub fn component(&self, w: &CylinderWord) -> Result<usize, CodingError> {
        if w.len() > self.depth() {
            return Err(CodingError::DepthOutOfRange {
                requested: w.len(),
                depth: self.depth(),
            });
        }
        let d = self.alphabet_size();
        let mut v = 0;
        // c(ε_j…ε_k) from the tail inwards
        for j in (0..w.len()).rev() {
            let level = w.len() - j;
            let s = w.0[j] as usize;
            if s >= d {
                return Err(CodingError::NoComponent(w.clone()));
            }
            v = match self.index[level][v * d + s] {
                Slot::One(x) => x,
                Slot::Empty => return Err(CodingError::NoComponent(w.clone())),
                Slot::Many => return Err(CodingError::Ambiguous(w.clone())),
            };
        }
        Ok(v)
    }

    /// `c(w)` for every word of length `k`, in lexicographic order.
    pub fn all_components(&self, k: usize) -> Result<Vec<Result<usize, CodingError>>, CodingError> {
        if k > self.depth() {
            return Err(CodingError::DepthOutOfRange {
                requested: k,
                depth: self.depth(),
            });
        }
        let d = self.alphabet_size();
        let n = word_count(d, k).ok_or(CodingError::TooManyWords {
            words: u64::MAX,
        })?;
        Ok((0..n)
            .into_par_iter()
            .map(|i| self.component(&CylinderWord::from_index(i, d, k)))
            .collect())
    }
}

/// `c(w)` for one word.
pub fn cylinder_component<G: ComponentGraph + ?Sized + Sync>(
    assignment: &SymbolAssignment,
    graph: &G,
    w: &CylinderWord,
) -> Result<usize, CodingError> {
    Coding::new(graph, assignment).component(w)
}

/// Words of length `k` grouped by the component coding them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberTable {
    pub level: usize,
    /// Lexicographically sorted words, per component.
    pub words: Vec<Vec<CylinderWord>>,
}

impl FiberTable {
    pub fn counts(&self) -> Vec<u64> {
        self.words.iter().map(|w| w.len() as u64).collect()
    }
}

pub fn fibers<G: ComponentGraph + ?Sized + Sync>(
    coding: &Coding<'_, G>,
    k: usize,
) -> Result<FiberTable, CodingError> {
    let d = coding.alphabet_size();
    let comps = coding.all_components(k)?;
    let mut words: Vec<Vec<CylinderWord>> = vec![Vec::new(); coding.graph().level_len(k)];
    for (i, c) in comps.into_iter().enumerate() {
        words[c?].push(CylinderWord::from_index(i as u64, d, k));
    }
    Ok(FiberTable { level: k, words })
}

#[cfg(test)]
mod tests;
