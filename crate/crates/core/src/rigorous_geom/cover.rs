use serde::{Deserialize, Serialize};

use super::{GeomError, IntervalBox};

/// Square grid frame: cell `(i, j)` at resolution `r` is
/// `[x0 + i s, x0 + (i+1) s] × [y0 + j s, y0 + (j+1) s]` with
/// `s = side / 2^r`. All endpoints are exact dyadic floats for `r <= 50`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub x0: f64,
    pub y0: f64,
    pub side: f64,
}

pub const MAX_RESOLUTION: u32 = 50;

impl Frame {
    /// Smallest power-of-two square centered at the origin containing the
    /// closed disk `D(0, radius)` with a small margin.
    pub fn centered_covering(radius: f64) -> Self {
        let want = 2.0 * radius * 1.0625;
        let mut side = 1.0;
        while side < want {
            side *= 2.0;
        }
        Self {
            x0: -side / 2.0,
            y0: -side / 2.0,
            side,
        }
    }

    pub fn cell_side(&self, resolution: u32) -> f64 {
        self.side * (0.5f64).powi(resolution as i32)
    }

    pub fn bounds(&self) -> IntervalBox {
        IntervalBox::new(self.x0, self.x0 + self.side, self.y0, self.y0 + self.side)
    }
}

/// Cell indices for one axis overlapping `[lo, hi]`, padded by a rounding
/// margin so the range never misses a touching cell.
fn axis_range(origin: f64, step: f64, resolution: u32, lo: f64, hi: f64) -> (i64, i64) {
    let margin = (2f64).powi(resolution as i32 - 50) + 1e-9;
    let a = ((lo - origin) / step - margin).floor();
    let b = ((hi - origin) / step + margin).floor();
    let clamp = |x: f64| x.clamp(-(1i64 << 60) as f64, (1i64 << 60) as f64) as i64;
    (clamp(a), clamp(b))
}

/// A set of cells on a common dyadic grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxCover {
    frame: Frame,
    resolution: u32,
    cells: Vec<(i64, i64)>,
}

impl BoxCover {
    pub fn new(frame: Frame, resolution: u32, mut cells: Vec<(i64, i64)>) -> Self {
        cells.sort_unstable();
        cells.dedup();
        Self {
            frame,
            resolution,
            cells,
        }
    }

    pub fn empty(frame: Frame, resolution: u32) -> Self {
        Self::new(frame, resolution, Vec::new())
    }

    /// All cells of the frame at `resolution` that may meet `region`.
    pub fn covering(frame: Frame, resolution: u32, region: &IntervalBox) -> Self {
        let s = frame.cell_side(resolution);
        let n = 1i64 << resolution;
        let (i0, i1) = axis_range(frame.x0, s, resolution, region.re_lo(), region.re_hi());
        let (j0, j1) = axis_range(frame.y0, s, resolution, region.im_lo(), region.im_hi());
        let mut cells = Vec::new();
        for i in i0.max(0)..=i1.min(n - 1) {
            for j in j0.max(0)..=j1.min(n - 1) {
                cells.push((i, j));
            }
        }
        Self::new(frame, resolution, cells)
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn cells(&self) -> &[(i64, i64)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_side(&self) -> f64 {
        self.frame.cell_side(self.resolution)
    }

    pub fn cell_box(&self, cell: (i64, i64)) -> IntervalBox {
        let s = self.cell_side();
        let x = self.frame.x0 + cell.0 as f64 * s;
        let y = self.frame.y0 + cell.1 as f64 * s;
        IntervalBox::new(x, x + s, y, y + s)
    }

    pub fn contains_cell(&self, cell: (i64, i64)) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Bounding box of the union of cells.
    pub fn bbox(&self) -> Option<IntervalBox> {
        let (mut i0, mut i1, mut j0, mut j1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for &(i, j) in &self.cells {
            i0 = i0.min(i);
            i1 = i1.max(i);
            j0 = j0.min(j);
            j1 = j1.max(j);
        }
        if self.cells.is_empty() {
            return None;
        }
        let lo = self.cell_box((i0, j0));
        let hi = self.cell_box((i1, j1));
        Some(IntervalBox::new(lo.re_lo(), hi.re_hi(), lo.im_lo(), hi.im_hi()))
    }

    /// Splits every cell into its four children at `resolution + 1`.
    pub fn refine(&self, cap: usize) -> Result<BoxCover, GeomError> {
        let count = self.cells.len() * 4;
        if count > cap {
            return Err(GeomError::BudgetExceeded { boxes: count, cap });
        }
        if self.resolution >= MAX_RESOLUTION {
            return Err(GeomError::ResolutionLimit(self.resolution + 1));
        }
        let mut cells = Vec::with_capacity(count);
        for &(i, j) in &self.cells {
            for (di, dj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                cells.push((2 * i + di, 2 * j + dj));
            }
        }
        Ok(BoxCover::new(self.frame, self.resolution + 1, cells))
    }

    /// Re-expresses the cover at a finer resolution without changing the
    /// covered point set.
    pub fn at_resolution(&self, resolution: u32) -> BoxCover {
        assert!(resolution >= self.resolution);
        let shift = resolution - self.resolution;
        let k = 1i64 << shift;
        let mut cells = Vec::with_capacity(self.cells.len() * (k * k) as usize);
        for &(i, j) in &self.cells {
            for a in 0..k {
                for b in 0..k {
                    cells.push((i * k + a, j * k + b));
                }
            }
        }
        BoxCover::new(self.frame, resolution, cells)
    }

    fn index_range(&self, b: &IntervalBox) -> Option<(i64, i64, i64, i64)> {
        if !b.is_finite() {
            return None;
        }
        let s = self.cell_side();
        let (i0, i1) = axis_range(self.frame.x0, s, self.resolution, b.re_lo(), b.re_hi());
        let (j0, j1) = axis_range(self.frame.y0, s, self.resolution, b.im_lo(), b.im_hi());
        Some((i0, i1, j0, j1))
    }

    /// Cells whose closed box may meet `b`.
    pub fn cells_meeting(&self, b: &IntervalBox) -> Vec<(i64, i64)> {
        let Some((i0, i1, j0, j1)) = self.index_range(b) else {
            return self.cells.clone();
        };
        let span = (i1 - i0 + 1).saturating_mul(j1 - j0 + 1);
        if span as usize > self.cells.len() || span < 0 {
            return self
                .cells
                .iter()
                .copied()
                .filter(|&(i, j)| i0 <= i && i <= i1 && j0 <= j && j <= j1)
                .collect();
        }
        let mut out = Vec::new();
        for i in i0..=i1 {
            let start = self.cells.partition_point(|&c| c < (i, j0));
            for &c in &self.cells[start..] {
                if c.0 != i || c.1 > j1 {
                    break;
                }
                out.push(c);
            }
        }
        out
    }

    /// May `b` meet the union of cells? A `false` answer is certified.
    pub fn intersects_box(&self, b: &IntervalBox) -> bool {
        let Some((i0, i1, j0, j1)) = self.index_range(b) else {
            return !self.cells.is_empty();
        };
        let span = (i1 - i0 + 1).saturating_mul(j1 - j0 + 1);
        if span as usize > self.cells.len() || span < 0 {
            return self
                .cells
                .iter()
                .any(|&(i, j)| i0 <= i && i <= i1 && j0 <= j && j <= j1);
        }
        (i0..=i1).any(|i| {
            let start = self.cells.partition_point(|&c| c < (i, j0));
            self.cells
                .get(start)
                .is_some_and(|&c| c.0 == i && c.1 <= j1)
        })
    }

    /// Certified `b ⊂ union of cells`: every cell `b` could touch is present.
    pub fn covers_box(&self, b: &IntervalBox) -> bool {
        let Some((i0, i1, j0, j1)) = self.index_range(b) else {
            return false;
        };
        let span = (i1 - i0 + 1).saturating_mul(j1 - j0 + 1);
        if span as usize > self.cells.len() || span < 0 {
            return false;
        }
        (i0..=i1).all(|i| (j0..=j1).all(|j| self.contains_cell((i, j))))
    }

    /// Union of two covers on the same frame and resolution.
    pub fn union(&self, other: &BoxCover) -> BoxCover {
        assert_eq!(self.resolution, other.resolution);
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        BoxCover::new(self.frame, self.resolution, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_frame() -> Frame {
        Frame {
            x0: -8.0,
            y0: -8.0,
            side: 16.0,
        }
    }

    #[test]
    fn refine_one_box_gives_four() {
        let c = BoxCover::new(unit_frame(), 3, vec![(2, 5)]);
        let r = c.refine(100).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.resolution(), 4);
        let parent = c.cell_box((2, 5));
        for &cell in r.cells() {
            assert!(parent.contains_box(&r.cell_box(cell)));
        }
    }

    #[test]
    fn refine_empty_is_empty() {
        let c = BoxCover::empty(unit_frame(), 3);
        assert!(c.refine(10).unwrap().is_empty());
    }

    #[test]
    fn refine_respects_cap() {
        let c = BoxCover::new(unit_frame(), 3, vec![(0, 0), (1, 1)]);
        assert!(matches!(
            c.refine(7),
            Err(GeomError::BudgetExceeded { boxes: 8, cap: 7 })
        ));
    }

    #[test]
    fn range_queries() {
        let c = BoxCover::new(unit_frame(), 4, vec![(0, 0), (1, 0), (5, 5)]);
        // cell (1,0) spans [-7, -6] x [-8, -7]
        assert!(c.intersects_box(&IntervalBox::new(-6.5, -6.2, -7.5, -7.2)));
        assert!(c.intersects_box(&IntervalBox::point(-6.0, -7.0)));
        assert!(!c.intersects_box(&IntervalBox::new(-4.0, -3.5, -7.5, -7.2)));
        assert!(c.covers_box(&IntervalBox::new(-7.9, -6.1, -7.9, -7.1)));
        assert!(!c.covers_box(&IntervalBox::new(-7.9, -5.5, -7.9, -7.1)));
        assert_eq!(c.cells_meeting(&IntervalBox::point(-2.5, -2.5)), vec![(5, 5)]);
    }

    #[test]
    fn at_resolution_preserves_area() {
        let c = BoxCover::new(unit_frame(), 2, vec![(1, 1), (2, 1)]);
        let f = c.at_resolution(4);
        assert_eq!(f.len(), 32);
        assert_eq!(f.bbox(), c.bbox());
    }
}
