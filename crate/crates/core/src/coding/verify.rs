use serde::{Deserialize, Serialize};

use super::{word_count, Coding, CodingError, CylinderWord};
use crate::graph::ComponentGraph;

/// Counterexamples kept per check.
const MAX_COUNTEREXAMPLES: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub failures: u64,
    pub counterexamples: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            passed: true,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn fail(&mut self, msg: impl FnOnce() -> String) {
        self.passed = false;
        self.failures += 1;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(msg());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub level: usize,
    pub words: u64,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}/{} checks pass, {} cylinders",
            self.passed_count(),
            self.checks.len(),
            self.words
        )
    }
}

fn chain_has_critical<G: ComponentGraph + ?Sized>(g: &G, level: usize, index: usize) -> bool {
    let (mut l, mut i) = (level, index);
    while l > 0 {
        if g.contains_critical(l, i) {
            return true;
        }
        match g.image(l, i) {
            Some(v) => i = v,
            None => return false,
        }
        l -= 1;
    }
    false
}

/// Runs the five coding checks over all words of length `k`:
/// nesting, equivariance, surjectivity, fiber size and critical merging.
pub fn verify_semiconjugacy<G: ComponentGraph + ?Sized + Sync>(
    coding: &Coding<'_, G>,
    k: usize,
) -> Result<VerificationReport, CodingError> {
    let g = coding.graph();
    let d = coding.alphabet_size();
    let n = word_count(d, k).ok_or(CodingError::TooManyWords { words: u64::MAX })?;
    let here = coding.all_components(k)?;
    let below = coding.all_components(k.saturating_sub(1))?;

    let mut nesting = CheckResult::new("nesting");
    let mut equivariance = CheckResult::new("equivariance");
    let mut surjectivity = CheckResult::new("surjectivity");
    let mut fiber_size = CheckResult::new("fiber_size");
    let mut merging = CheckResult::new("critical_merging");

    let len = g.level_len(k);
    let mut counts = vec![0u64; len];
    // first symbol seen per component; a second distinct one means merging
    let mut first_symbol: Vec<Option<u32>> = vec![None; len];
    let mut merged = vec![false; len];
    let tail_count = n / d as u64;
    for (idx, c) in here.iter().enumerate() {
        let idx = idx as u64;
        let w = || CylinderWord::from_index(idx, d, k);
        let c = match c {
            Ok(c) => *c,
            Err(e) => {
                equivariance.fail(|| e.to_string());
                continue;
            }
        };
        counts[c] += 1;
        if k == 0 {
            continue;
        }
        let prefix = &below[(idx / d as u64) as usize];
        match prefix {
            Ok(p) if g.container(k, c) == Some(*p) => {}
            Ok(p) => nesting.fail(|| {
                format!("c({}) = ({k},{c}) is not inside c(prefix) = ({},{p})", w(), k - 1)
            }),
            Err(e) => nesting.fail(|| format!("prefix of {}: {e}", w())),
        }
        let tail = &below[(idx % tail_count) as usize];
        match tail {
            Ok(t) if g.image(k, c) == Some(*t) => {}
            Ok(t) => equivariance.fail(|| {
                format!("f(c({})) = ({},{:?}) but c(shift) = ({},{t})", w(), k - 1, g.image(k, c), k - 1)
            }),
            Err(e) => equivariance.fail(|| format!("shift of {}: {e}", w())),
        }
        let s = (idx / tail_count) as u32;
        match first_symbol[c] {
            None => first_symbol[c] = Some(s),
            Some(t) if t != s => merged[c] = true,
            _ => {}
        }
    }
    for c in 0..len {
        if counts[c] == 0 {
            surjectivity.fail(|| format!("({k},{c}) is coded by no word"));
        }
        let expect = g.cumulative_degree(k, c);
        if counts[c] != expect {
            fiber_size.fail(|| {
                format!("({k},{c}) has {} words, cumulative degree {expect}", counts[c])
            });
        }
        if merged[c] && !chain_has_critical(g, k, c) {
            merging.fail(|| {
                format!("({k},{c}) merges distinct first symbols without a critical point")
            });
        }
    }
    Ok(VerificationReport {
        level: k,
        words: n,
        checks: vec![nesting, equivariance, surjectivity, fiber_size, merging],
    })
}
