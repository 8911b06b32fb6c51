//! The combinatorial view of a component tree shared by certified trees and
//! synthetic ones.

/// Levelwise tree with nesting (`container`) and dynamics (`image`).
///
/// Level 0 has a single component, the root. For a level `k >= 1`
/// component, `container` is at level `k - 1` and so is `image`.
pub trait ComponentGraph {
    /// Degree `d` of the map.
    fn alphabet_size(&self) -> usize;
    fn depth(&self) -> usize;
    fn level_len(&self, level: usize) -> usize;
    fn container(&self, level: usize, index: usize) -> Option<usize>;
    fn image(&self, level: usize, index: usize) -> Option<usize>;
    /// Degree of `f` on the component; 1 for the root.
    fn local_degree(&self, level: usize, index: usize) -> u32;
    fn contains_critical(&self, level: usize, index: usize) -> bool;

    /// Degree of `f^k` on the component.
    fn cumulative_degree(&self, level: usize, index: usize) -> u64 {
        let mut deg = 1u64;
        let (mut l, mut i) = (level, index);
        while l > 0 {
            deg *= self.local_degree(l, i) as u64;
            i = self.image(l, i).expect("non-root component has an image");
            l -= 1;
        }
        deg
    }
}

/// Structural invariants any tree must satisfy. Returns a description of
/// each violation; empty when the tree is consistent.
pub fn structure_violations<G: ComponentGraph + ?Sized>(g: &G) -> Vec<String> {
    let d = g.alphabet_size() as u64;
    let mut out = Vec::new();
    if g.level_len(0) != 1 {
        out.push(format!("level 0 has {} components", g.level_len(0)));
    }
    for k in 1..=g.depth() {
        let prev = g.level_len(k - 1);
        let mut by_image = vec![0u64; prev];
        let mut children = vec![0usize; prev];
        let mut total = 0u64;
        for i in 0..g.level_len(k) {
            let (Some(c), Some(v)) = (g.container(k, i), g.image(k, i)) else {
                out.push(format!("({k},{i}) lacks container or image"));
                continue;
            };
            if c >= prev || v >= prev {
                out.push(format!("({k},{i}) points outside level {}", k - 1));
                continue;
            }
            children[c] += 1;
            let ld = g.local_degree(k, i);
            by_image[v] += ld as u64;
            total += g.cumulative_degree(k, i);
            if (ld >= 2) != g.contains_critical(k, i) {
                out.push(format!("({k},{i}) has degree {ld} but critical flag disagrees"));
            }
            if k >= 2 {
                // f maps the parent onto the image's parent
                let parent_image = g.image(k - 1, c);
                let image_container = g.container(k - 1, v);
                if parent_image != image_container {
                    out.push(format!("({k},{i}): image of parent is not parent of image"));
                }
            }
        }
        for (v, &s) in by_image.iter().enumerate() {
            if s != d {
                out.push(format!("level {k}: degrees over ({},{v}) sum to {s}", k - 1));
            }
        }
        if let Some(p) = children.iter().position(|&n| n == 0) {
            out.push(format!("({},{p}) has no children", k - 1));
        }
        let expect = d.pow(k as u32);
        if total != expect {
            out.push(format!("level {k}: cumulative degrees sum to {total}, not {expect}"));
        }
    }
    out
}
