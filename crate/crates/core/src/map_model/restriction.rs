//! Hypothesis checks for the restriction `f : U' -> U`.

use serde::{Deserialize, Serialize};

use super::{DomainDisk, ExactComplex, PolynomialMap};
use crate::puzzle_tree::{Component, TreeError};
use crate::rigorous_geom::{exact_rational, IntervalBox};

/// Exact arithmetic on orbits is abandoned past this many bits.
const EXACT_BIT_CAP: u64 = 4096;

/// What is known about the forward orbit of one critical point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CriticalStatus {
    /// `f(c)` is certified outside `U`, so `c` is not in `U'`.
    OutsideRestriction,
    /// `f^step(c)` is certified outside `U`: the orbit leaves `U'`.
    Escapes { step: usize },
    /// The exact orbit returns to `c`.
    Periodic { period: usize },
    /// The exact orbit lands on a cycle that avoids `c`.
    Preperiodic { preperiod: usize, period: usize },
    /// The orbit stays in `U'` and avoids `c` for `horizon` steps;
    /// nothing is claimed beyond.
    AvoidsItself { horizon: usize },
    Undecided { reason: String },
}

impl CriticalStatus {
    pub fn in_restriction(&self) -> bool {
        !matches!(self, CriticalStatus::OutsideRestriction)
    }

    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            CriticalStatus::Escapes { .. } | CriticalStatus::Periodic { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionReport {
    pub n_components: usize,
    pub branch_degrees: Vec<u32>,
    pub compactly_contained: bool,
    pub critical_statuses: Vec<CriticalStatus>,
    pub periodic_critical_flag: bool,
    pub hypothesis_ok: bool,
    pub warnings: Vec<String>,
}

/// Decides `closure(U') ⊂ U` from the level-1 covers: `Some(true)` when
/// every cell is certified inside `U`, `Some(false)` when an exact witness
/// `z ∉ U` with `f(z) ∈ closure(U)` is found, `None` otherwise.
pub(crate) fn containment(map: &PolynomialMap, disk: &DomainDisk, level1: &[Component]) -> Option<bool> {
    let mut offending: Vec<IntervalBox> = Vec::new();
    for comp in level1 {
        for &cell in comp.cover.cells() {
            let b = comp.cover.cell_box(cell);
            if !disk.contains_box(&b) {
                offending.push(b);
            }
        }
    }
    if offending.is_empty() {
        return Some(true);
    }
    let r = disk.radius.clone();
    let c = &disk.center;
    let zero = num_rational::BigRational::from_integer(0.into());
    let mut witnesses = vec![
        c + &ExactComplex::new(r.clone(), zero.clone()),
        c - &ExactComplex::new(r.clone(), zero.clone()),
        c + &ExactComplex::new(zero.clone(), r.clone()),
        c - &ExactComplex::new(zero, r),
    ];
    for b in offending.iter().take(4096) {
        for (x, y) in [
            (b.re_lo(), b.im_lo()),
            (b.re_lo(), b.im_hi()),
            (b.re_hi(), b.im_lo()),
            (b.re_hi(), b.im_hi()),
            b.center(),
        ] {
            if let (Some(x), Some(y)) = (exact_rational(x), exact_rational(y)) {
                witnesses.push(ExactComplex::new(x, y));
            }
        }
    }
    let found = witnesses
        .iter()
        .any(|z| !disk.contains_exact(z) && disk.closure_contains_exact(&map.eval_exact(z)));
    if found {
        Some(false)
    } else {
        None
    }
}

fn exact_critical_point(map: &PolynomialMap, center: (f64, f64)) -> Option<ExactComplex> {
    let w = ExactComplex::from_f64(center.0, center.1)?;
    let t = map.taylor_exact(&w);
    t[1].is_zero().then_some(w)
}

fn exact_orbit_status(
    map: &PolynomialMap,
    disk: &DomainDisk,
    c: &ExactComplex,
    horizon: usize,
) -> Option<CriticalStatus> {
    let mut orbit = vec![c.clone()];
    for n in 1..=horizon + 1 {
        let next = map.eval_exact(orbit.last().unwrap());
        if !disk.contains_exact(&next) {
            return Some(CriticalStatus::Escapes { step: n });
        }
        if let Some(m) = orbit.iter().position(|w| *w == next) {
            return Some(if m == 0 {
                CriticalStatus::Periodic { period: n }
            } else {
                CriticalStatus::Preperiodic {
                    preperiod: m,
                    period: n - m,
                }
            });
        }
        if next.bit_size() > EXACT_BIT_CAP {
            return None;
        }
        orbit.push(next);
    }
    None
}

fn interval_orbit_status(
    map: &PolynomialMap,
    disk: &DomainDisk,
    enclosure: &IntervalBox,
    horizon: usize,
) -> CriticalStatus {
    let mut z = *enclosure;
    for n in 1..=horizon + 1 {
        z = map.eval_box(&z);
        if disk.misses_box(&z) {
            return CriticalStatus::Escapes { step: n };
        }
        if !disk.contains_box(&z) {
            return CriticalStatus::Undecided {
                reason: format!("orbit enclosure straddles the disk boundary at step {n}"),
            };
        }
        if n <= horizon && z.intersects(enclosure) {
            return CriticalStatus::Undecided {
                reason: format!("orbit may return to the critical point at step {n}"),
            };
        }
    }
    CriticalStatus::AvoidsItself { horizon }
}

/// Status of every critical point of the polynomial relative to `U' = f^{-1}(U)`.
pub(crate) fn critical_statuses(
    map: &PolynomialMap,
    disk: &DomainDisk,
    horizon: usize,
) -> Vec<CriticalStatus> {
    map.critical_points()
        .iter()
        .map(|cp| {
            let enc = cp.enclosure();
            let image = map.eval_box(&enc);
            if disk.misses_box(&image) {
                return CriticalStatus::OutsideRestriction;
            }
            if let Some(w) = exact_critical_point(map, cp.center()) {
                if !disk.contains_exact(&map.eval_exact(&w)) {
                    return CriticalStatus::OutsideRestriction;
                }
                if let Some(status) = exact_orbit_status(map, disk, &w, horizon) {
                    return status;
                }
            }
            if !disk.contains_box(&image) {
                return CriticalStatus::Undecided {
                    reason: "critical value on the disk boundary".into(),
                };
            }
            interval_orbit_status(map, disk, &enc, horizon)
        })
        .collect()
}

/// Checks the polynomial-like hypotheses from the level-1 components.
pub fn validate_restriction(
    map: &PolynomialMap,
    disk: &DomainDisk,
    level1: &[Component],
    horizon: usize,
) -> Result<RestrictionReport, TreeError> {
    let compactly_contained = containment(map, disk, level1).ok_or_else(|| {
        TreeError::Undecided("cannot certify separation of U' from the boundary of U".into())
    })?;
    let branch_degrees: Vec<u32> = level1.iter().map(|c| c.local_degree).collect();
    let critical_statuses = critical_statuses(map, disk, horizon);
    let periodic_critical_flag = critical_statuses
        .iter()
        .any(|s| matches!(s, CriticalStatus::Periodic { .. }));
    let mut warnings = Vec::new();
    for (i, s) in critical_statuses.iter().enumerate() {
        match s {
            CriticalStatus::Undecided { reason } => {
                warnings.push(format!("critical point {i}: undecided ({reason})"))
            }
            CriticalStatus::AvoidsItself { horizon } => warnings.push(format!(
                "critical point {i}: non-periodicity only checked for {horizon} steps"
            )),
            _ => {}
        }
    }
    let n_components = level1.len();
    if n_components < 2 {
        warnings.push("U' is connected (N < 2): the Julia set is connected".into());
    }
    let degree_sum: u32 = branch_degrees.iter().sum();
    let hypothesis_ok = n_components >= 2
        && compactly_contained
        && degree_sum as usize == map.degree()
        && !critical_statuses.iter().any(CriticalStatus::is_violation);
    Ok(RestrictionReport {
        n_components,
        branch_degrees,
        compactly_contained,
        critical_statuses,
        periodic_critical_flag,
        hypothesis_ok,
        warnings,
    })
}
