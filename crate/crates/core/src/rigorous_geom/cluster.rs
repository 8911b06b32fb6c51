//! Edge-adjacent cluster labeling of grid cells.

use petgraph::unionfind::UnionFind;

use super::BoxCover;

/// Partitions a cover into maximal clusters of cells sharing an edge.
/// Clusters are ordered by the lower-left corner of their bounding box
/// (minimum real part first, then minimum imaginary part).
pub fn connected_clusters(cover: &BoxCover) -> Vec<BoxCover> {
    let cells = cover.cells();
    let n = cells.len();
    let mut uf = UnionFind::<usize>::new(n);
    for (idx, &(i, j)) in cells.iter().enumerate() {
        for nb in [(i + 1, j), (i, j + 1)] {
            if let Ok(other) = cells.binary_search(&nb) {
                uf.union(idx, other);
            }
        }
    }
    let labels = uf.into_labeling();
    let mut slot = vec![usize::MAX; n];
    let mut groups: Vec<Vec<(i64, i64)>> = Vec::new();
    for (idx, &root) in labels.iter().enumerate() {
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(cells[idx]);
    }
    let mut clusters: Vec<BoxCover> = groups
        .into_iter()
        .map(|g| BoxCover::new(cover.frame(), cover.resolution(), g))
        .collect();
    clusters.sort_by_key(cluster_key);
    clusters
}

fn cluster_key(c: &BoxCover) -> (i64, i64, i64, i64) {
    let i0 = c.cells().iter().map(|c| c.0).min().unwrap_or(0);
    let j0 = c.cells().iter().map(|c| c.1).min().unwrap_or(0);
    let i1 = c.cells().iter().map(|c| c.0).max().unwrap_or(0);
    let j1 = c.cells().iter().map(|c| c.1).max().unwrap_or(0);
    (i0, j0, i1, j1)
}

/// True when no two clusters touch, not even at a corner, so their closed
/// unions are disjoint. All clusters must share one grid.
pub fn clusters_separated(clusters: &[BoxCover]) -> bool {
    let mut owner: Vec<((i64, i64), usize)> = clusters
        .iter()
        .enumerate()
        .flat_map(|(k, c)| c.cells().iter().map(move |&cell| (cell, k)))
        .collect();
    owner.sort_unstable();
    let lookup = |cell: (i64, i64)| {
        owner
            .binary_search_by(|probe| probe.0.cmp(&cell))
            .ok()
            .map(|idx| owner[idx].1)
    };
    for &((i, j), k) in &owner {
        for di in -1..=1 {
            for dj in -1..=1 {
                if (di, dj) == (0, 0) {
                    continue;
                }
                if let Some(other) = lookup((i + di, j + dj)) {
                    if other != k {
                        return false;
                    }
                }
            }
        }
    }
    true
}
