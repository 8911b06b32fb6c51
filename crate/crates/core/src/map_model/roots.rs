//! Certified root isolation for polynomials with interval coefficients.
//!
//! Approximations come from Aberth iteration on the midpoint polynomial.
//! They are grouped into clusters, and each cluster is certified with
//! Pellet's test: if the Taylor coefficients `b_j` of `p` at `c` satisfy
//! `|b_m| r^m > sum_{j != m} |b_j| r^j`, the disk `D(c, r)` holds exactly
//! `m` roots counted with multiplicity. The bound is evaluated with
//! interval arithmetic, so it holds for every polynomial whose
//! coefficients lie in the given boxes.

use num_complex::Complex64;

use super::MapError;
use crate::rigorous_geom::{Interval, IntervalBox};

/// A disk certified to contain exactly `multiplicity` roots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootDisk {
    pub center: (f64, f64),
    pub radius: f64,
    pub multiplicity: u32,
}

impl RootDisk {
    pub fn enclosure(&self) -> IntervalBox {
        IntervalBox::around(self.center.0, self.center.1, self.radius)
    }

    fn center_c(&self) -> Complex64 {
        Complex64::new(self.center.0, self.center.1)
    }

    /// True when the two disks are certified disjoint.
    pub fn disjoint_from(&self, other: &RootDisk) -> bool {
        let d = (self.center_c() - other.center_c()).norm();
        d * (1.0 - 1e-12) > (self.radius + other.radius) * (1.0 + 1e-12)
    }
}

const MAX_ABERTH_ITERATIONS: usize = 2000;

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let n = coeffs.len() - 1;
    let mut p = coeffs[n];
    let mut dp = Complex64::new(0.0, 0.0);
    for i in (0..n).rev() {
        dp = dp * z + p;
        p = p * z + coeffs[i];
    }
    (p, dp)
}

/// Aberth–Ehrlich approximations of all roots of a polynomial given by
/// ascending coefficients with nonzero leading term.
pub fn approximate_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(|a| (a / lead).norm())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, theta)
        })
        .collect();
    for _ in 0..MAX_ABERTH_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-17 {
            break;
        }
    }
    z
}

/// Coefficients of `p(z + c)` in interval arithmetic.
pub fn taylor_shift(coeffs: &[IntervalBox], c: IntervalBox) -> Vec<IntervalBox> {
    let mut b = coeffs.to_vec();
    let n = b.len() - 1;
    for i in 0..n {
        for j in (i..n).rev() {
            b[j] = b[j] + c * b[j + 1];
        }
    }
    b
}

fn powers(r: f64, n: usize) -> Vec<Interval> {
    let base = Interval::point(r);
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Interval::point(1.0);
    for _ in 0..=n {
        out.push(acc);
        acc = acc * base;
    }
    out
}

/// Pellet's test: does `D(center, r)` contain exactly `m` roots?
pub fn pellet(coeffs: &[IntervalBox], center: (f64, f64), r: f64, m: usize) -> bool {
    let shifted = taylor_shift(coeffs, IntervalBox::point(center.0, center.1));
    let n = shifted.len() - 1;
    let rp = powers(r, n);
    let lhs = (Interval::point(shifted[m].mig()) * rp[m]).lo();
    let mut rhs = Interval::ZERO;
    for (j, b) in shifted.iter().enumerate() {
        if j != m {
            rhs = rhs + Interval::point(b.mag()) * rp[j];
        }
    }
    lhs > rhs.hi()
}

fn group(points: &[Complex64], threshold: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() <= threshold {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut label, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

fn certify_groups(
    coeffs: &[IntervalBox],
    points: &[Complex64],
    groups: &[Vec<usize>],
    scale: f64,
) -> Option<Vec<RootDisk>> {
    let mut disks = Vec::with_capacity(groups.len());
    for g in groups {
        let c: Complex64 = g.iter().map(|&i| points[i]).sum::<Complex64>() / g.len() as f64;
        let spread = g.iter().map(|&i| (points[i] - c).norm()).fold(0.0, f64::max);
        // nearest point outside the group caps the radius
        let gap = points
            .iter()
            .enumerate()
            .filter(|(i, _)| !g.contains(i))
            .map(|(_, p)| (p - c).norm())
            .fold(f64::INFINITY, f64::min);
        let mut r = (2.0 * spread).max(1e-15 * scale);
        let mut found = None;
        while r < 0.5 * gap.min(1e3 * scale) {
            if pellet(coeffs, (c.re, c.im), r, g.len()) {
                found = Some(r);
                break;
            }
            r *= 4.0;
        }
        disks.push(RootDisk {
            center: (c.re, c.im),
            radius: found?,
            multiplicity: g.len() as u32,
        });
    }
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            if !disks[i].disjoint_from(&disks[j]) {
                return None;
            }
        }
    }
    Some(disks)
}

/// Isolates all roots of the polynomial with ascending interval
/// coefficients. The leading coefficient must exclude zero. Returned disks
/// are pairwise disjoint, sorted by center, and their multiplicities sum to
/// the degree.
pub fn isolate_roots(coeffs: &[IntervalBox]) -> Result<Vec<RootDisk>, MapError> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if coeffs[n].mig() == 0.0 {
        return Err(MapError::PrecisionExceeded(
            "leading coefficient may vanish".into(),
        ));
    }
    let mids: Vec<Complex64> = coeffs
        .iter()
        .map(|b| {
            let (re, im) = b.center();
            Complex64::new(re, im)
        })
        .collect();
    let points = approximate_roots(&mids);
    let scale = points.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let mut thresholds = vec![0.0];
    let mut t = 1e-13;
    while t < 1.0 {
        thresholds.push(t * scale);
        t *= 10.0;
    }
    for threshold in thresholds {
        let groups = group(&points, threshold);
        if let Some(mut disks) = certify_groups(coeffs, &points, &groups, scale) {
            disks.sort_by(|a, b| {
                a.center
                    .0
                    .total_cmp(&b.center.0)
                    .then(a.center.1.total_cmp(&b.center.1))
            });
            return Ok(disks);
        }
    }
    Err(MapError::PrecisionExceeded(format!(
        "could not separate the roots of a degree-{n} polynomial"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_poly(c: &[f64]) -> Vec<IntervalBox> {
        c.iter().map(|&x| IntervalBox::point(x, 0.0)).collect()
    }

    #[test]
    fn simple_roots_of_quadratic() {
        // z^2 - 6
        let disks = isolate_roots(&real_poly(&[-6.0, 0.0, 1.0])).unwrap();
        assert_eq!(disks.len(), 2);
        let s6 = 6f64.sqrt();
        assert!((disks[0].center.0 + s6).abs() <= disks[0].radius + 1e-12);
        assert!((disks[1].center.0 - s6).abs() <= disks[1].radius + 1e-12);
        assert!(disks.iter().all(|d| d.multiplicity == 1 && d.radius < 1e-10));
    }

    #[test]
    fn double_root_is_one_cluster() {
        // 3z^2
        let disks = isolate_roots(&real_poly(&[0.0, 0.0, 3.0])).unwrap();
        assert_eq!(disks.len(), 1);
        assert_eq!(disks[0].multiplicity, 2);
        assert!(disks[0].enclosure().contains_point(0.0, 0.0));
    }

    #[test]
    fn triple_root_with_simple_root() {
        // (z - 1)^3 (z + 2) = z^4 - z^3 - 3z^2 + 5z - 2
        let disks = isolate_roots(&real_poly(&[-2.0, 5.0, -3.0, -1.0, 1.0])).unwrap();
        let mults: Vec<u32> = disks.iter().map(|d| d.multiplicity).collect();
        assert_eq!(mults, vec![1, 3]);
        assert!(disks[1].enclosure().contains_point(1.0, 0.0));
    }

    #[test]
    fn complex_roots() {
        // z^2 + 1
        let disks = isolate_roots(&real_poly(&[1.0, 0.0, 1.0])).unwrap();
        assert_eq!(disks.len(), 2);
        for d in &disks {
            assert!(d.center.0.abs() < 1e-10);
            assert!((d.center.1.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn pellet_counts_roots_in_a_disk() {
        let p = real_poly(&[-6.0, 0.0, 1.0]);
        assert!(pellet(&p, (2.45, 0.0), 0.1, 1));
        assert!(pellet(&p, (0.0, 0.0), 10.0, 2));
        assert!(!pellet(&p, (0.0, 0.0), 1.0, 1));
    }
}
