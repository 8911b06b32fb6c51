//! SVG drawing of component covers.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::coding::SymbolAssignment;
use crate::puzzle_tree::{Component, PuzzleTree};
use crate::rigorous_geom::BoxCover;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorBy {
    /// Levels `1..=k` stacked, one color per level.
    Level,
    /// Level `k` only, one color per first symbol.
    Symbols,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub level: usize,
    pub color_by: ColorBy,
    /// Width and height in pixels.
    pub size: u32,
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

struct View {
    x0: f64,
    y1: f64,
    scale: f64,
}

impl View {
    fn x(&self, x: f64) -> f64 {
        (x - self.x0) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        (self.y1 - y) * self.scale
    }
}

/// Cells merged into vertical runs, one rectangle per run.
fn fill_runs(out: &mut String, view: &View, cover: &BoxCover) {
    let cells = cover.cells();
    let s = cover.cell_side();
    let mut k = 0;
    while k < cells.len() {
        let (i, j0) = cells[k];
        let mut j1 = j0;
        while k + 1 < cells.len() && cells[k + 1] == (i, j1 + 1) {
            k += 1;
            j1 += 1;
        }
        k += 1;
        let lo = cover.cell_box((i, j0));
        let h = (j1 - j0 + 1) as f64 * s;
        let _ = write!(
            out,
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\"/>",
            view.x(lo.re_lo()),
            view.y(lo.im_lo() + h),
            s * view.scale,
            h * view.scale
        );
    }
}

/// Boundary edges of a cover as one path.
fn outline(out: &mut String, view: &View, cover: &BoxCover) {
    out.push_str("<path d=\"");
    for &(i, j) in cover.cells() {
        let b = cover.cell_box((i, j));
        let (x0, x1, y0, y1) = (view.x(b.re_lo()), view.x(b.re_hi()), view.y(b.im_lo()), view.y(b.im_hi()));
        let edges = [
            ((i - 1, j), (x0, y0, x0, y1)),
            ((i + 1, j), (x1, y0, x1, y1)),
            ((i, j - 1), (x0, y0, x1, y0)),
            ((i, j + 1), (x0, y1, x1, y1)),
        ];
        for (nb, (a, b, c, d)) in edges {
            if !cover.contains_cell(nb) {
                let _ = write!(out, "M{a:.3} {b:.3}L{c:.3} {d:.3}");
            }
        }
    }
    out.push_str("\"/>");
}

fn component_group(out: &mut String, view: &View, comp: &Component, fill: &str, opacity: f64) {
    let _ = write!(
        out,
        "<g id=\"c{}-{}\" fill=\"{fill}\" fill-opacity=\"{opacity:.2}\" stroke=\"none\">",
        comp.level, comp.index
    );
    fill_runs(out, view, &comp.cover);
    out.push_str("</g>");
    let _ = write!(out, "<g fill=\"none\" stroke=\"#000000\" stroke-width=\"0.5\">");
    outline(out, view, &comp.cover);
    out.push_str("</g>");
}

/// Deterministic SVG of the covers up to `opts.level`.
pub fn render_svg(
    tree: &PuzzleTree,
    assignment: Option<&SymbolAssignment>,
    opts: &RenderOptions,
) -> String {
    let level = opts.level.min(tree.depth());
    let disk = tree.disk();
    let (cx, cy) = disk.center_enclosure().center();
    let r = disk.radius_interval().hi() * 1.05;
    let size = opts.size.max(16) as f64;
    let view = View {
        x0: cx - r,
        y1: cy + r,
        scale: size / (2.0 * r),
    };
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">",
        opts.size.max(16)
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>");
    let _ = write!(
        out,
        "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"#444444\" stroke-dasharray=\"4 3\"/>",
        view.x(cx),
        view.y(cy),
        disk.radius_interval().hi() * view.scale
    );
    match opts.color_by {
        ColorBy::Level => {
            for k in 1..=level {
                let color = PALETTE[(k - 1) % PALETTE.len()];
                for comp in tree.level(k) {
                    component_group(&mut out, &view, comp, color, 0.35);
                }
            }
        }
        ColorBy::Symbols => {
            for comp in tree.level(level) {
                let first = assignment
                    .and_then(|a| a.sets.get(level))
                    .and_then(|l| l.get(comp.index))
                    .and_then(|s| s.first().copied())
                    .unwrap_or(0);
                let color = PALETTE[first as usize % PALETTE.len()];
                component_group(&mut out, &view, comp, color, 0.7);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map_model::{DomainDisk, PolynomialMap};
    use crate::puzzle_tree::{build_tree, ResolutionPolicy};

    #[test]
    fn quadratic_level_one_has_two_blobs() {
        let map = PolynomialMap::from_real_decimals(&["-6", "0", "1"]).unwrap();
        let disk = DomainDisk::centered("4").unwrap();
        let tree = build_tree(&map, &disk, 1, &ResolutionPolicy::default()).unwrap();
        let opts = RenderOptions {
            level: 1,
            color_by: ColorBy::Level,
            size: 400,
        };
        let svg = render_svg(&tree, None, &opts);
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<g id=").count(), 2);
        assert_eq!(svg, render_svg(&tree, None, &opts));
        // blobs sit left and right of the center column
        let (left, right) = (tree.level(1)[0].anchor, tree.level(1)[1].anchor);
        assert!((left.0 + 2.449).abs() < 0.05 && (right.0 - 2.449).abs() < 0.05);
    }
}
