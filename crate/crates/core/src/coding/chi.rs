use serde::{Deserialize, Serialize};

use super::CodingError;
use crate::map_model::{isolate_roots, CriticalStatus, ExactComplex};
use crate::puzzle_tree::{PuzzleTree, TreeError};
use crate::rigorous_geom::IntervalBox;

/// Exact orbit points larger than this switch to interval arithmetic.
const EXACT_BIT_CAP: u64 = 4096;

/// A point given exactly or as a simple preimage of another point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointSpec {
    Exact { point: ExactComplex },
    /// The root of `f(w) = of` closest to `near`; it must be simple.
    Preimage { of: Box<PointSpec>, near: [f64; 2] },
}

impl PointSpec {
    pub fn exact(point: ExactComplex) -> Self {
        PointSpec::Exact { point }
    }

    pub fn preimage(of: PointSpec, near: (f64, f64)) -> Self {
        PointSpec::Preimage {
            of: Box::new(of),
            near: [near.0, near.1],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiStatus {
    Certified,
    LowerBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalHit {
    pub step: usize,
    pub critical_index: usize,
    pub point: String,
    pub local_degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiResult {
    pub value: u64,
    pub status: ChiStatus,
    pub horizon: usize,
    /// Orbit points examined.
    pub steps: usize,
    pub hits: Vec<CriticalHit>,
}

/// Orbit point: certified enclosure, or exact value.
#[derive(Clone)]
enum OrbitPoint {
    Boxed(IntervalBox),
    Exact(ExactComplex),
}

impl OrbitPoint {
    fn enclosure(&self) -> IntervalBox {
        match self {
            OrbitPoint::Boxed(b) => *b,
            OrbitPoint::Exact(z) => z.enclosure(),
        }
    }
}

/// Interval prefix of the orbit followed by its exact continuation.
fn resolve(tree: &PuzzleTree, spec: &PointSpec) -> Result<(Vec<IntervalBox>, ExactComplex), CodingError> {
    match spec {
        PointSpec::Exact { point } => Ok((Vec::new(), point.clone())),
        PointSpec::Preimage { of, near } => {
            let (prefix, base) = resolve(tree, of)?;
            let target = prefix.first().copied().unwrap_or_else(|| base.enclosure());
            let roots = isolate_roots(&tree.map().shifted_coefficients(&target))
                .map_err(|e| CodingError::Tree(TreeError::Map(e)))?;
            let dist = |c: (f64, f64)| (c.0 - near[0]).hypot(c.1 - near[1]);
            let best = roots
                .iter()
                .min_by(|a, b| dist(a.center).total_cmp(&dist(b.center)))
                .expect("a polynomial of degree >= 2 has roots");
            if best.multiplicity != 1 {
                return Err(CodingError::Undecided(
                    "requested preimage is a multiple root; give it as an exact point".into(),
                ));
            }
            let mut out = vec![best.enclosure()];
            out.extend(prefix);
            Ok((out, base))
        }
    }
}

/// `χ(z)`: product of local degrees of `f` along the orbit of `z`.
///
/// The walk stops after `horizon` steps or once the exact orbit closes up.
/// The value is certified when no further critical hit is possible: the
/// exact orbit cycled, every critical point of the restriction was hit and
/// none of them is periodic, or the value reached `2^{d-N}`.
pub fn chi(tree: &PuzzleTree, point: &PointSpec, horizon: usize) -> Result<ChiResult, CodingError> {
    let map = tree.map();
    let disk = tree.disk();
    let crits = map.critical_points();
    let restriction_crits = tree.restriction_critical_points();
    let statuses = &tree.restriction().critical_statuses;
    let n = tree.restriction().n_components;
    let d_prime = map.degree().saturating_sub(n) as u32;
    let bound = 1u64 << d_prime.min(63);

    let (prefix, base) = resolve(tree, point)?;
    let mut orbit: Vec<OrbitPoint> = prefix.into_iter().map(OrbitPoint::Boxed).collect();
    orbit.push(OrbitPoint::Exact(base));

    let mut value = 1u64;
    let mut hits: Vec<CriticalHit> = Vec::new();
    let mut seen_exact: Vec<ExactComplex> = Vec::new();
    let mut cycled = false;
    let mut steps = 0;
    let mut current = orbit.remove(0);
    for step in 0..=horizon {
        if let OrbitPoint::Exact(z) = &current {
            if seen_exact.contains(z) {
                cycled = true;
                break;
            }
        }
        steps = step + 1;
        let enc = current.enclosure();
        match &current {
            OrbitPoint::Exact(z) => {
                if !disk.contains_exact(z) {
                    return Err(TreeError::NotInCover { level: step }.into());
                }
            }
            OrbitPoint::Boxed(b) => {
                if disk.misses_box(b) {
                    return Err(TreeError::NotInCover { level: step }.into());
                }
                if !disk.contains_box(b) {
                    return Err(CodingError::Undecided(format!(
                        "orbit point {step} straddles the boundary of U"
                    )));
                }
            }
        }
        let degree = match &current {
            OrbitPoint::Exact(z) => map.local_degree_exact(z),
            OrbitPoint::Boxed(_) => {
                if crits.iter().any(|c| c.enclosure().intersects(&enc)) {
                    return Err(CodingError::Undecided(format!(
                        "orbit point {step} cannot be separated from a critical point"
                    )));
                }
                1
            }
        };
        if degree >= 2 {
            let idx = crits
                .iter()
                .position(|c| c.enclosure().intersects(&enc))
                .ok_or_else(|| CodingError::Undecided("critical hit not matched".into()))?;
            let text = match &current {
                OrbitPoint::Exact(z) => z.to_string(),
                OrbitPoint::Boxed(b) => b.to_string(),
            };
            hits.push(CriticalHit {
                step,
                critical_index: idx,
                point: text,
                local_degree: degree,
            });
            value = value.saturating_mul(degree as u64);
        }

        let next = match &current {
            OrbitPoint::Exact(z) => {
                seen_exact.push(z.clone());
                let w = map.eval_exact(z);
                if w.bit_size() > EXACT_BIT_CAP {
                    OrbitPoint::Boxed(map.eval_box(&z.enclosure()))
                } else {
                    OrbitPoint::Exact(w)
                }
            }
            OrbitPoint::Boxed(b) => {
                if orbit.is_empty() {
                    OrbitPoint::Boxed(map.eval_box(b))
                } else {
                    orbit.remove(0)
                }
            }
        };
        current = next;
    }

    let all_hit_non_periodic = restriction_crits.iter().all(|&c| {
        hits.iter().any(|h| h.critical_index == c)
            && matches!(statuses.get(c), Some(CriticalStatus::Preperiodic { .. }))
    });
    let certified = cycled || all_hit_non_periodic || value >= bound;
    if value > bound {
        return Err(CodingError::BoundViolated { value, bound });
    }
    Ok(ChiResult {
        value,
        status: if certified {
            ChiStatus::Certified
        } else {
            ChiStatus::LowerBound
        },
        horizon,
        steps,
        hits,
    })
}
