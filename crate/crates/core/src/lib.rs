//! Certified component trees of `f^{-k}(U)` for a polynomial restricted to
//! a disk, and the finite-depth shift coding they induce.

pub mod coding;
pub mod config;
pub mod export;
pub mod graph;
pub mod map_model;
pub mod oracle;
pub mod puzzle_tree;
pub mod render;
pub mod rigorous_geom;
pub mod search;

pub use coding::{assign_symbols, chi, fibers, verify_semiconjugacy, Coding, CylinderWord, SymbolAssignment};
pub use graph::ComponentGraph;
pub use map_model::{DomainDisk, ExactComplex, PolynomialMap};
pub use puzzle_tree::{build_tree, PuzzleTree, ResolutionPolicy};
