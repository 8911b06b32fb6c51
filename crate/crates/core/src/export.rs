//! JSON exports. Floats are written as decimal strings with an explicit
//! number of significant digits recorded in the metadata.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::coding::{fibers, Coding, CodingError, SymbolAssignment};
use crate::map_model::{format_rational, RestrictionReport};
use crate::puzzle_tree::{cantor_diagnostic, PuzzleTree, ResolutionPolicy};

/// Digits after the point in exported floats (scientific notation).
pub const PRECISION: usize = 16;

pub fn fmt_float(x: f64) -> String {
    format!("{:.*e}", PRECISION, x)
}

pub fn component_id(level: usize, index: usize) -> String {
    format!("{level}.{index}")
}

#[derive(Serialize)]
struct DiskExport {
    center: [String; 2],
    radius: String,
}

#[derive(Serialize)]
struct TreeMeta {
    format: &'static str,
    precision: usize,
    degree: usize,
    coefficients: Vec<[String; 2]>,
    disk: DiskExport,
    frame: [String; 3],
    depth: usize,
    policy: ResolutionPolicy,
    restriction: RestrictionReport,
    max_diameters: Vec<String>,
    diameters_strictly_decreasing: bool,
}

#[derive(Serialize)]
struct ComponentExport {
    id: String,
    level: usize,
    container: Option<String>,
    image: Option<String>,
    local_degree: u32,
    cumulative_degree: u64,
    diameter: String,
    /// `[re_lo, re_hi, im_lo, im_hi]`.
    bbox: [String; 4],
    resolution: u32,
    cells: usize,
    contains_critical: Vec<usize>,
    anchor: [String; 2],
}

#[derive(Serialize)]
struct TreeExport {
    meta: TreeMeta,
    levels: Vec<Vec<ComponentExport>>,
}

pub fn tree_json(tree: &PuzzleTree) -> String {
    let diag = cantor_diagnostic(tree);
    let disk = tree.disk();
    let frame = tree.frame();
    let meta = TreeMeta {
        format: "julia-shift-tree/1",
        precision: PRECISION,
        degree: tree.map().degree(),
        coefficients: tree
            .map()
            .coefficients()
            .iter()
            .map(|c| [format_rational(&c.re), format_rational(&c.im)])
            .collect(),
        disk: DiskExport {
            center: [format_rational(&disk.center.re), format_rational(&disk.center.im)],
            radius: format_rational(&disk.radius),
        },
        frame: [fmt_float(frame.x0), fmt_float(frame.y0), fmt_float(frame.side)],
        depth: tree.depth(),
        policy: tree.policy().clone(),
        restriction: tree.restriction().clone(),
        max_diameters: diag.max_diameters.iter().map(|&d| fmt_float(d)).collect(),
        diameters_strictly_decreasing: diag.strictly_decreasing,
    };
    let levels = tree
        .levels()
        .iter()
        .map(|lvl| {
            lvl.iter()
                .map(|c| {
                    let b = c.cover.bbox().expect("components are nonempty");
                    let parent = |i: Option<usize>| i.map(|i| component_id(c.level - 1, i));
                    ComponentExport {
                        id: component_id(c.level, c.index),
                        level: c.level,
                        container: parent(c.container),
                        image: parent(c.image),
                        local_degree: c.local_degree,
                        cumulative_degree: c.cumulative_degree,
                        diameter: fmt_float(c.diameter_bound),
                        bbox: [
                            fmt_float(b.re_lo()),
                            fmt_float(b.re_hi()),
                            fmt_float(b.im_lo()),
                            fmt_float(b.im_hi()),
                        ],
                        resolution: c.cover.resolution(),
                        cells: c.cover.len(),
                        contains_critical: c.contains_critical.clone(),
                        anchor: [fmt_float(c.anchor.0), fmt_float(c.anchor.1)],
                    }
                })
                .collect()
        })
        .collect();
    let out = TreeExport { meta, levels };
    serde_json::to_string_pretty(&out).expect("serializable") + "\n"
}

/// Per level: `{component_id: {symbols, fiber_count, fiber_words}}` for
/// levels `0..=k`.
pub fn coding_json(
    tree: &PuzzleTree,
    assignment: &SymbolAssignment,
    k: usize,
) -> Result<String, CodingError> {
    let coding = Coding::new(tree, assignment);
    let mut levels = Vec::with_capacity(k + 1);
    for level in 0..=k {
        let table = fibers(&coding, level)?;
        let mut entries = Map::new();
        for (i, words) in table.words.iter().enumerate() {
            entries.insert(
                component_id(level, i),
                json!({
                    "symbols": assignment.get(level, i),
                    "fiber_count": words.len(),
                    "fiber_words": words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
                }),
            );
        }
        levels.push(Value::Object(entries));
    }
    let out = json!({
        "meta": {
            "format": "julia-shift-coding/1",
            "alphabet_size": assignment.alphabet_size,
            "depth": k,
        },
        "levels": levels,
    });
    Ok(serde_json::to_string_pretty(&out).expect("serializable") + "\n")
}
