#![allow(dead_code)]

use julia_shift::config::{MapConfig, CUBIC_TOML, QUADRATIC_TOML};
use julia_shift::{build_tree, PuzzleTree};

pub fn from_preset(text: &str, depth: usize) -> PuzzleTree {
    let cfg = MapConfig::from_toml_str(text).unwrap();
    let map = cfg.map().unwrap();
    let disk = cfg.disk(&map).unwrap();
    build_tree(&map, &disk, depth, &cfg.policy()).unwrap()
}

/// `z^2 - 6` on `D(0, 4)`.
pub fn quadratic(depth: usize) -> PuzzleTree {
    from_preset(QUADRATIC_TOML, depth)
}

/// `z^3 - 6.75 z + 3.75` on `D(0, 6)`.
pub fn cubic(depth: usize) -> PuzzleTree {
    from_preset(CUBIC_TOML, depth)
}
