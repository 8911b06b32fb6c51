//! Certified geometry: interval arithmetic, dyadic box covers, and
//! connected-cluster labeling.

mod cluster;
mod cover;
mod interval;

use thiserror::Error;

pub use cluster::{clusters_separated, connected_clusters};
pub use cover::{BoxCover, Frame, MAX_RESOLUTION};
pub(crate) use interval::hypot_up;
pub use interval::{exact_rational, Interval, IntervalBox};

use crate::map_model::PolynomialMap;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("box budget exceeded: {boxes} boxes > cap {cap}")]
    BudgetExceeded { boxes: usize, cap: usize },
    #[error("resolution limit reached ({0})")]
    ResolutionLimit(u32),
}

/// Certified image of `b` under the map. Overflow yields the entire plane.
pub fn eval_enclosure(map: &PolynomialMap, b: &IntervalBox) -> IntervalBox {
    map.eval_box(b)
}

/// Enclosure of `f^n(b)`.
pub fn iterate_enclosure(map: &PolynomialMap, b: &IntervalBox, n: usize) -> IntervalBox {
    let mut z = *b;
    for _ in 0..n {
        z = map.eval_box(&z);
        if !z.is_finite() {
            return IntervalBox::ENTIRE;
        }
    }
    z
}

pub fn refine(cover: &BoxCover, cap: usize) -> Result<BoxCover, GeomError> {
    cover.refine(cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> PolynomialMap {
        PolynomialMap::from_real_decimals(&["-6", "0", "1"]).unwrap()
    }

    #[test]
    fn hand_interval_example() {
        let b = IntervalBox::new(1.0, 2.0, 0.0, 1.0);
        let img = eval_enclosure(&quad(), &b);
        // x^2 - y^2 - 6 in [-6, -2], 2xy in [0, 4]
        assert!(img.contains_box(&IntervalBox::new(-6.0, -2.0, 0.0, 4.0)));
    }

    #[test]
    fn point_evaluation_contains_exact_value() {
        let img = eval_enclosure(&quad(), &IntervalBox::point(1.5, -0.5));
        // (1.5 - 0.5i)^2 - 6 = 2.25 - 0.25 - 1.5i - 6 = -4 - 1.5i
        assert!(img.contains_point(-4.0, -1.5));
        assert!(img.diameter() < 1e-14);
    }

    #[test]
    fn small_box_at_origin_misses_disk_of_radius_four() {
        let b = IntervalBox::new(-0.1, 0.1, -0.1, 0.1);
        let img = eval_enclosure(&quad(), &b);
        let rel = img - IntervalBox::point(-6.0, 0.0);
        assert!(rel.mag() <= 0.1 + 1e-12);
        let disk = crate::map_model::DomainDisk::centered("4").unwrap();
        assert!(disk.misses_box(&img));
    }

    #[test]
    fn overflow_gives_entire() {
        let b = IntervalBox::point(1e200, 0.0);
        assert_eq!(iterate_enclosure(&quad(), &b, 3), IntervalBox::ENTIRE);
    }
}
