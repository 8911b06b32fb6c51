//! The levelwise tree of connected components of `f^{-k}(U)`.
//!
//! Every component carries an outer cover by grid cells, the component of
//! the previous level containing it, the component it maps onto, and its
//! mapping degree. A level is accepted only after each cluster of cells is
//! certified to hold exactly one component.

mod build;
mod locate;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{build_tree, build_tree_shrinking};
pub use locate::locate;

use crate::graph::ComponentGraph;
use crate::map_model::{DomainDisk, MapError, PolynomialMap, RestrictionReport};
use crate::rigorous_geom::{BoxCover, Frame, GeomError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("resolution exceeded: {0}")]
    ResolutionExceeded(String),
    #[error("hypothesis violation: {reason}")]
    HypothesisViolation {
        reason: String,
        report: Option<Box<RestrictionReport>>,
    },
    #[error("undecided: {0}")]
    Undecided(String),
    #[error("point is certified outside the level-{level} cover")]
    NotInCover { level: usize },
    #[error("level {requested} requested but the tree has depth {depth}")]
    LevelOutOfRange { requested: usize, depth: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

impl TreeError {
    pub(crate) fn violation(reason: impl Into<String>) -> Self {
        TreeError::HypothesisViolation {
            reason: reason.into(),
            report: None,
        }
    }
}

impl From<GeomError> for TreeError {
    fn from(e: GeomError) -> Self {
        TreeError::ResolutionExceeded(e.to_string())
    }
}

/// Refinement budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionPolicy {
    /// Resolution of the starting grid over the frame.
    pub base_resolution: u32,
    /// Cap on the number of cells held at one level.
    pub max_boxes: usize,
    /// Cap on refinement steps spent below a parent's resolution while
    /// separating its children.
    pub max_refine: u32,
    /// Steps used to decide the critical orbit hypotheses.
    pub horizon: usize,
    /// Extra refinement steps applied to each certified cover. Thin
    /// covers keep the gaps between siblings wide, so the next level
    /// separates at a coarser resolution.
    #[serde(default = "default_tighten")]
    pub tighten: u32,
}

fn default_tighten() -> u32 {
    2
}

impl Default for ResolutionPolicy {
    fn default() -> Self {
        Self {
            base_resolution: 5,
            max_boxes: 1_000_000,
            max_refine: 16,
            horizon: 20,
            tighten: default_tighten(),
        }
    }
}

/// One connected component `W` of `f^{-k}(U)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub level: usize,
    pub index: usize,
    pub container: Option<usize>,
    pub image: Option<usize>,
    pub local_degree: u32,
    pub cumulative_degree: u64,
    pub cover: BoxCover,
    pub diameter_bound: f64,
    /// Indices into the map's critical point list.
    pub contains_critical: Vec<usize>,
    /// A float point certified to lie in `W`.
    pub anchor: (f64, f64),
}

/// Cell statistics for one level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub cells: usize,
    pub min_resolution: u32,
    pub max_resolution: u32,
}

#[derive(Clone, Debug)]
pub struct PuzzleTree {
    pub(crate) map: PolynomialMap,
    pub(crate) disk: DomainDisk,
    pub(crate) frame: Frame,
    pub(crate) policy: ResolutionPolicy,
    pub(crate) levels: Vec<Vec<Component>>,
    pub(crate) restriction: RestrictionReport,
}

impl PuzzleTree {
    pub fn map(&self) -> &PolynomialMap {
        &self.map
    }

    pub fn disk(&self) -> &DomainDisk {
        &self.disk
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn policy(&self) -> &ResolutionPolicy {
        &self.policy
    }

    pub fn restriction(&self) -> &RestrictionReport {
        &self.restriction
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &[Component] {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Vec<Component>] {
        &self.levels
    }

    pub fn component(&self, level: usize, index: usize) -> &Component {
        &self.levels[level][index]
    }

    /// Components of level `k + 1` contained in `(k, index)`.
    pub fn children(&self, level: usize, index: usize) -> impl Iterator<Item = &Component> {
        self.levels
            .get(level + 1)
            .into_iter()
            .flatten()
            .filter(move |c| c.container == Some(index))
    }

    pub fn level_stats(&self) -> Vec<LevelStats> {
        self.levels
            .iter()
            .map(|comps| LevelStats {
                cells: comps.iter().map(|c| c.cover.len()).sum(),
                min_resolution: comps.iter().map(|c| c.cover.resolution()).min().unwrap_or(0),
                max_resolution: comps.iter().map(|c| c.cover.resolution()).max().unwrap_or(0),
            })
            .collect()
    }

    /// Critical points of the restriction (those inside `U'`).
    pub fn restriction_critical_points(&self) -> Vec<usize> {
        self.levels
            .get(1)
            .into_iter()
            .flatten()
            .flat_map(|c| c.contains_critical.iter().copied())
            .collect()
    }
}

impl ComponentGraph for PuzzleTree {
    fn alphabet_size(&self) -> usize {
        self.map.degree()
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
        !self.levels[level][index].contains_critical.is_empty()
    }
}

/// Per-level maximum of the component diameter bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CantorDiagnostic {
    pub max_diameters: Vec<f64>,
    /// True when the sequence strictly decreases from level to level. This
    /// is evidence for, not a proof of, shrinking components.
    pub strictly_decreasing: bool,
}

pub fn cantor_diagnostic(tree: &PuzzleTree) -> CantorDiagnostic {
    let max_diameters: Vec<f64> = tree
        .levels
        .iter()
        .map(|lvl| lvl.iter().map(|c| c.diameter_bound).fold(0.0, f64::max))
        .collect();
    let strictly_decreasing = max_diameters.windows(2).all(|w| w[1] < w[0]);
    CantorDiagnostic {
        max_diameters,
        strictly_decreasing,
    }
}
