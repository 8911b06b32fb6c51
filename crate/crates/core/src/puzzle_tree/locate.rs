use super::{PuzzleTree, TreeError};
use crate::map_model::ExactComplex;

/// Exact orbits are abandoned past this many bits.
const EXACT_BIT_CAP: u64 = 1 << 16;

/// Decides `f^j(z) ∈ U`: interval orbit first, exact orbit as fallback.
fn in_preimage(tree: &PuzzleTree, z: &ExactComplex, j: usize) -> Option<bool> {
    let mut b = z.enclosure();
    for _ in 0..j {
        b = tree.map.eval_box(&b);
    }
    if tree.disk.contains_box(&b) {
        return Some(true);
    }
    if tree.disk.misses_box(&b) {
        return Some(false);
    }
    let mut w = z.clone();
    for _ in 0..j {
        w = tree.map.eval_exact(&w);
        if w.bit_size() > EXACT_BIT_CAP {
            return None;
        }
    }
    Some(tree.disk.contains_exact(&w))
}

/// Indices of the components containing `z` at levels `0..=k`.
pub fn locate(tree: &PuzzleTree, z: &ExactComplex, k: usize) -> Result<Vec<usize>, TreeError> {
    if k > tree.depth() {
        return Err(TreeError::LevelOutOfRange {
            requested: k,
            depth: tree.depth(),
        });
    }
    let enc = z.enclosure();
    let mut path = Vec::with_capacity(k + 1);
    for j in 0..=k {
        match in_preimage(tree, z, j) {
            Some(true) => {}
            Some(false) => return Err(TreeError::NotInCover { level: j }),
            None => {
                return Err(TreeError::Undecided(format!(
                    "membership of the point in f^-{j}(U)"
                )))
            }
        }
        let hits: Vec<usize> = tree.levels[j]
            .iter()
            .filter(|c| c.cover.intersects_box(&enc))
            .map(|c| c.index)
            .collect();
        match hits.as_slice() {
            [one] => path.push(*one),
            [] => {
                return Err(TreeError::Undecided(format!(
                    "point in f^-{j}(U) but outside every level-{j} cover"
                )))
            }
            _ => {
                return Err(TreeError::Undecided(format!(
                    "point enclosure meets several level-{j} covers"
                )))
            }
        }
    }
    Ok(path)
}
