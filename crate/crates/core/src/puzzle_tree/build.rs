use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{Component, PuzzleTree, ResolutionPolicy, TreeError};
use crate::map_model::{
    escape_radius, isolate_roots, validate_restriction, DomainDisk, PolynomialMap, RootDisk,
};
use crate::map_model::containment;
use crate::rigorous_geom::{
    connected_clusters, iterate_enclosure, BoxCover, Frame, IntervalBox,
};

/// `(re_lo, im_lo, re_hi, im_hi)` of a bounding box.
type BboxKey = (f64, f64, f64, f64);

/// Where a critical point sits relative to `f^{-k}(U)`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum CritLevel {
    In,
    Out,
}

/// An edge-connected cluster of cells at one resolution.
struct Piece {
    cover: BoxCover,
    bbox: IntervalBox,
    images: Vec<usize>,
}

struct Assessment {
    bad: Vec<bool>,
    straddle: bool,
    crits: Vec<Vec<usize>>,
    roots: Vec<Vec<RootDisk>>,
}

/// May the closed unions of two pieces meet? Pieces can sit on different
/// resolutions, so the test goes cell by cell.
fn pieces_touch(a: &Piece, b: &Piece) -> bool {
    if !a.bbox.intersects(&b.bbox) {
        return false;
    }
    let (small, big) = if a.cover.len() <= b.cover.len() { (a, b) } else { (b, a) };
    small.cover.cells().iter().any(|&c| {
        let cb = small.cover.cell_box(c);
        big.bbox.intersects(&cb) && big.cover.intersects_box(&cb)
    })
}

/// A certified cluster before canonical ordering.
struct Draft {
    parent: usize,
    cover: BoxCover,
    image: usize,
    crits: Vec<usize>,
    roots: Vec<RootDisk>,
}

struct LevelContext<'a> {
    map: &'a PolynomialMap,
    disk: &'a DomainDisk,
    policy: &'a ResolutionPolicy,
    frame: Frame,
    level: usize,
    prev: &'a [Component],
    prev_bboxes: Vec<IntervalBox>,
    /// Roots of `f(z) = anchor(V)` for each component `V` of the previous level.
    roots: Vec<Vec<RootDisk>>,
    crit_status: Vec<CritLevel>,
}

fn crit_level_status(
    map: &PolynomialMap,
    disk: &DomainDisk,
    enclosure: &IntervalBox,
    k: usize,
    nested: bool,
) -> Option<CritLevel> {
    let mut z = *enclosure;
    for j in 1..=k {
        z = map.eval_box(&z);
        // Leaving U at an earlier step only rules out f^{-k}(U) once
        // f^{-1}(U) ⊂ U is known.
        if disk.misses_box(&z) && (nested || j == k) {
            return Some(CritLevel::Out);
        }
    }
    disk.contains_box(&z).then_some(CritLevel::In)
}

impl LevelContext<'_> {
    fn candidates(&self, parent: &Component) -> Vec<usize> {
        match parent.image {
            None => vec![0],
            Some(img) => self
                .prev
                .iter()
                .filter(|v| v.container == Some(img))
                .map(|v| v.index)
                .collect(),
        }
    }

    fn region(&self, parent: &Component) -> BoxCover {
        if self.level == 1 {
            BoxCover::covering(
                self.frame,
                self.policy.base_resolution,
                &self.frame.bounds(),
            )
        } else {
            parent.cover.clone()
        }
    }

    fn hits(&self, candidates: &[usize], cell_box: &IntervalBox) -> Vec<usize> {
        let img = self.map.eval_box(cell_box);
        if self.level == 1 {
            if self.disk.misses_box(&img) {
                Vec::new()
            } else {
                vec![0]
            }
        } else {
            candidates
                .iter()
                .copied()
                .filter(|&v| {
                    self.prev_bboxes[v].intersects(&img) && self.prev[v].cover.intersects_box(&img)
                })
                .collect()
        }
    }

    /// Clusters of the cells of `cover` whose image may meet a target,
    /// each with the sorted set of targets its cells hit.
    fn classify(&self, candidates: &[usize], cover: &BoxCover) -> Vec<Piece> {
        let kept: Vec<((i64, i64), Vec<usize>)> = cover
            .cells()
            .par_iter()
            .filter_map(|&cell| {
                let h = self.hits(candidates, &cover.cell_box(cell));
                (!h.is_empty()).then_some((cell, h))
            })
            .collect();
        // filtering preserves the sorted order of the input cells
        let cells: Vec<(i64, i64)> = kept.iter().map(|(c, _)| *c).collect();
        let kept_cover = BoxCover::new(cover.frame(), cover.resolution(), cells);
        connected_clusters(&kept_cover)
            .into_iter()
            .map(|cluster| {
                let mut images: Vec<usize> = cluster
                    .cells()
                    .iter()
                    .flat_map(|cell| {
                        let idx = kept_cover.cells().binary_search(cell).expect("cluster cell");
                        kept[idx].1.iter().copied()
                    })
                    .collect();
                images.sort_unstable();
                images.dedup();
                let bbox = cluster.bbox().expect("nonempty cluster");
                Piece {
                    cover: cluster,
                    bbox,
                    images,
                }
            })
            .collect()
    }

    /// Marks pieces that cannot yet be certified as one component each and
    /// attaches critical points and anchor preimages to the others.
    fn assess(
        &self,
        parent: &Component,
        region: &BoxCover,
        candidates: &[usize],
        pieces: &[Piece],
    ) -> Result<Assessment, TreeError> {
        let n = pieces.len();
        let mut bad = vec![false; n];
        let mut straddle = false;
        for (i, p) in pieces.iter().enumerate() {
            if p.images.len() > 1 {
                bad[i] = true;
                straddle = true;
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if pieces_touch(&pieces[a], &pieces[b]) {
                    bad[a] = true;
                    bad[b] = true;
                }
            }
        }
        let meeting = |enc: &IntervalBox| -> Vec<usize> {
            (0..n)
                .filter(|&i| pieces[i].bbox.intersects(enc) && pieces[i].cover.intersects_box(enc))
                .collect()
        };

        let mut crits: Vec<Vec<usize>> = vec![Vec::new(); n];
        let crit_here: Vec<usize> = if self.level == 1 {
            (0..self.crit_status.len()).collect()
        } else {
            parent.contains_critical.clone()
        };
        for c in crit_here {
            if self.crit_status[c] != CritLevel::In {
                continue;
            }
            let hits = meeting(&self.map.critical_points()[c].enclosure());
            match hits.as_slice() {
                [one] => crits[*one].push(c),
                [] => {
                    return Err(TreeError::ResolutionExceeded(format!(
                        "critical point {c} lost from the level-{} cover",
                        self.level
                    )))
                }
                many => many.iter().for_each(|&i| bad[i] = true),
            }
        }

        let mut roots: Vec<Vec<RootDisk>> = vec![Vec::new(); n];
        for &v in candidates {
            for disk in &self.roots[v] {
                let enc = disk.enclosure();
                if !region.intersects_box(&enc) {
                    continue;
                }
                if !region.covers_box(&enc) {
                    return Err(TreeError::Undecided(format!(
                        "a preimage of the anchor of component {v} sits on the boundary of a level-{} cover",
                        self.level - 1
                    )));
                }
                let hits = meeting(&enc);
                match hits.as_slice() {
                    [one] if pieces[*one].images.contains(&v) => roots[*one].push(*disk),
                    [] | [_] => {
                        return Err(TreeError::ResolutionExceeded(format!(
                            "a preimage of component {v} of level {} is missing from the cover",
                            self.level - 1
                        )))
                    }
                    many => many.iter().for_each(|&i| bad[i] = true),
                }
            }
        }

        for i in 0..n {
            let root_count: u32 = roots[i].iter().map(|r| r.multiplicity).sum();
            let crit_mult: u32 = crits[i]
                .iter()
                .map(|&c| self.map.critical_points()[c].multiplicity())
                .sum();
            if root_count != 1 + crit_mult {
                bad[i] = true;
            }
        }
        Ok(Assessment {
            bad,
            straddle,
            crits,
            roots,
        })
    }

    /// Refines a certified cover and drops cells whose image misses the
    /// target. The result still contains the component.
    fn tighten(&self, mut cover: BoxCover, image: usize) -> Result<BoxCover, TreeError> {
        for _ in 0..self.policy.tighten {
            let fine = cover.refine(self.policy.max_boxes)?;
            let cells: Vec<(i64, i64)> = fine
                .cells()
                .par_iter()
                .copied()
                .filter(|&c| !self.hits(&[image], &fine.cell_box(c)).is_empty())
                .collect();
            cover = BoxCover::new(fine.frame(), fine.resolution(), cells);
        }
        Ok(cover)
    }

    fn split_parent(&self, parent: &Component) -> Result<Vec<Draft>, TreeError> {
        let candidates = self.candidates(parent);
        let region = self.region(parent);
        let max_res = region.resolution() + self.policy.max_refine;
        let mut pieces = self.classify(&candidates, &region);
        loop {
            if pieces.is_empty() {
                return Err(TreeError::ResolutionExceeded(format!(
                    "component {} of level {} has no preimage cells",
                    parent.index,
                    self.level - 1
                )));
            }
            let assessment = self.assess(parent, &region, &candidates, &pieces)?;
            if !assessment.bad.iter().any(|&b| b) {
                let Assessment { crits, roots, .. } = assessment;
                return pieces
                    .into_iter()
                    .zip(crits)
                    .zip(roots)
                    .map(|((p, crits), roots)| {
                        let image = p.images[0];
                        Ok(Draft {
                            parent: parent.index,
                            cover: self.tighten(p.cover, image)?,
                            image,
                            crits,
                            roots,
                        })
                    })
                    .collect();
            }
            let mut next = Vec::with_capacity(pieces.len());
            let mut refined = Vec::new();
            for (p, bad) in pieces.into_iter().zip(&assessment.bad) {
                if !*bad {
                    next.push(p);
                    continue;
                }
                if p.cover.resolution() >= max_res {
                    let msg = format!(
                        "level {} inside component {}: children not separated after {} refinements",
                        self.level, parent.index, self.policy.max_refine
                    );
                    return Err(if assessment.straddle {
                        TreeError::violation(msg)
                    } else {
                        TreeError::ResolutionExceeded(msg)
                    });
                }
                refined.push(p.cover.refine(self.policy.max_boxes)?);
            }
            let total: usize =
                next.iter().map(|p| p.cover.len()).sum::<usize>() + refined.iter().map(|c| c.len()).sum::<usize>();
            if total > self.policy.max_boxes {
                return Err(TreeError::ResolutionExceeded(format!(
                    "level {} inside component {} needs {total} cells (cap {})",
                    self.level, parent.index, self.policy.max_boxes
                )));
            }
            for cover in refined {
                next.extend(self.classify(&candidates, &cover));
            }
            pieces = next;
        }
    }

    fn build(&self) -> Result<Vec<Component>, TreeError> {
        let per_parent: Vec<Result<Vec<Draft>, TreeError>> =
            self.prev.par_iter().map(|p| self.split_parent(p)).collect();
        let mut drafts: Vec<Draft> = Vec::new();
        for r in per_parent {
            drafts.extend(r?);
        }
        let total: usize = drafts.iter().map(|d| d.cover.len()).sum();
        if total > self.policy.max_boxes {
            return Err(TreeError::ResolutionExceeded(format!(
                "level {} needs {total} cells (cap {})",
                self.level, self.policy.max_boxes
            )));
        }

        let d = self.map.degree() as u32;
        let mut degree_sums = vec![0u32; self.prev.len()];
        for dr in &drafts {
            degree_sums[dr.image] += dr.roots.iter().map(|r| r.multiplicity).sum::<u32>();
        }
        if let Some(v) = degree_sums.iter().position(|&s| s != d) {
            return Err(TreeError::ResolutionExceeded(format!(
                "component {v} of level {} has preimage degree {} instead of {d}",
                self.level - 1,
                degree_sums[v]
            )));
        }

        let keyed: Vec<(BboxKey, usize, usize)> = drafts
            .iter()
            .enumerate()
            .map(|(i, dr)| {
                let b = dr.cover.bbox().expect("nonempty cluster");
                ((b.re_lo(), b.im_lo(), b.re_hi(), b.im_hi()), dr.parent, i)
            })
            .collect();
        let mut order: Vec<usize> = (0..drafts.len()).collect();
        order.sort_by(|&a, &b| {
            let (ka, pa, ia) = keyed[a];
            let (kb, pb, ib) = keyed[b];
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(ka.2.total_cmp(&kb.2))
                .then(ka.3.total_cmp(&kb.3))
                .then(pa.cmp(&pb))
                .then(ia.cmp(&ib))
        });

        let mut slots: Vec<Option<Draft>> = drafts.into_iter().map(Some).collect();
        let mut out = Vec::with_capacity(order.len());
        for (index, &i) in order.iter().enumerate() {
            let dr = slots[i].take().expect("each draft used once");
            let anchor = self.certified_anchor(&dr)?;
            let crit_mult: u32 = dr
                .crits
                .iter()
                .map(|&c| self.map.critical_points()[c].multiplicity())
                .sum();
            let local_degree = 1 + crit_mult;
            let bbox = dr.cover.bbox().expect("nonempty cluster");
            out.push(Component {
                level: self.level,
                index,
                container: Some(dr.parent),
                image: Some(dr.image),
                local_degree,
                cumulative_degree: local_degree as u64 * self.prev[dr.image].cumulative_degree,
                diameter_bound: bbox.diameter(),
                cover: dr.cover,
                contains_critical: dr.crits,
                anchor,
            });
        }
        Ok(out)
    }

    fn certified_anchor(&self, draft: &Draft) -> Result<(f64, f64), TreeError> {
        for root in &draft.roots {
            let (x, y) = root.center;
            let img = iterate_enclosure(self.map, &IntervalBox::point(x, y), self.level);
            if self.disk.contains_box(&img) {
                return Ok((x, y));
            }
        }
        Err(TreeError::Undecided(format!(
            "no certified anchor point for a level-{} component",
            self.level
        )))
    }
}

fn root_component(disk: &DomainDisk, frame: Frame, policy: &ResolutionPolicy) -> Result<Component, TreeError> {
    let grid = BoxCover::covering(frame, policy.base_resolution, &frame.bounds());
    let cells: Vec<(i64, i64)> = grid
        .cells()
        .iter()
        .copied()
        .filter(|&c| !disk.misses_box(&grid.cell_box(c)))
        .collect();
    let cover = BoxCover::new(frame, policy.base_resolution, cells);
    let anchor = disk.center_enclosure().center();
    if !disk.contains_box(&IntervalBox::point(anchor.0, anchor.1)) {
        return Err(TreeError::Undecided("disk center is not representable".into()));
    }
    Ok(Component {
        level: 0,
        index: 0,
        container: None,
        image: None,
        local_degree: 1,
        cumulative_degree: 1,
        cover,
        diameter_bound: 2.0 * disk.radius_interval().hi(),
        contains_critical: Vec::new(),
        anchor,
    })
}

fn frame_for(map: &PolynomialMap, disk: &DomainDisk) -> Frame {
    let escape = escape_radius(map).to_f64().unwrap_or(f64::MAX);
    Frame::centered_covering(escape.max(disk.outer_modulus()) * (1.0 + 1e-9))
}

fn next_level(
    map: &PolynomialMap,
    disk: &DomainDisk,
    policy: &ResolutionPolicy,
    frame: Frame,
    prev: &[Component],
    level: usize,
) -> Result<Vec<Component>, TreeError> {
    let mut crit_status = Vec::new();
    for (i, cp) in map.critical_points().iter().enumerate() {
        let status = crit_level_status(map, disk, &cp.enclosure(), level, level > 1)
            .ok_or_else(|| {
                TreeError::Undecided(format!(
                    "cannot decide whether critical point {i} lies in f^-{level}(U)"
                ))
            })?;
        crit_status.push(status);
    }
    let roots: Vec<Vec<RootDisk>> = prev
        .par_iter()
        .map(|v| {
            let target = IntervalBox::point(v.anchor.0, v.anchor.1);
            isolate_roots(&map.shifted_coefficients(&target))
        })
        .collect::<Result<_, _>>()?;
    let ctx = LevelContext {
        map,
        disk,
        policy,
        frame,
        level,
        prev,
        prev_bboxes: prev
            .iter()
            .map(|c| c.cover.bbox().unwrap_or(IntervalBox::ENTIRE))
            .collect(),
        roots,
        crit_status,
    };
    ctx.build()
}

/// Refines level-1 covers until containment in `U` is decided.
fn tighten_level_one(
    map: &PolynomialMap,
    disk: &DomainDisk,
    policy: &ResolutionPolicy,
    level1: &mut [Component],
) -> Result<(), TreeError> {
    for _ in 0..policy.max_refine {
        if containment(map, disk, level1).is_some() {
            return Ok(());
        }
        for comp in level1.iter_mut() {
            let refined = comp.cover.refine(policy.max_boxes)?;
            let cells: Vec<(i64, i64)> = refined
                .cells()
                .par_iter()
                .copied()
                .filter(|&c| !disk.misses_box(&map.eval_box(&refined.cell_box(c))))
                .collect();
            comp.cover = BoxCover::new(refined.frame(), refined.resolution(), cells);
            comp.diameter_bound = comp
                .cover
                .bbox()
                .map_or(comp.diameter_bound, |b| b.diameter());
        }
    }
    Ok(())
}

/// Builds levels `0..=depth` of the component tree of `f^{-k}(U)`.
pub fn build_tree(
    map: &PolynomialMap,
    disk: &DomainDisk,
    depth: usize,
    policy: &ResolutionPolicy,
) -> Result<PuzzleTree, TreeError> {
    let frame = frame_for(map, disk);
    let root = root_component(disk, frame, policy)?;
    let mut levels = vec![vec![root]];
    let mut level1 = next_level(map, disk, policy, frame, &levels[0], 1)?;
    tighten_level_one(map, disk, policy, &mut level1)?;
    let report = validate_restriction(map, disk, &level1, policy.horizon)?;
    if !report.hypothesis_ok {
        let reason = if report.n_components < 2 {
            format!("U' has {} component(s); at least 2 are needed", report.n_components)
        } else if !report.compactly_contained {
            "U' is not compactly contained in U".to_string()
        } else if report.periodic_critical_flag {
            "a critical point is periodic".to_string()
        } else {
            "a critical point leaves U'".to_string()
        };
        return Err(TreeError::HypothesisViolation {
            reason,
            report: Some(Box::new(report)),
        });
    }
    levels.push(level1);
    for k in 2..=depth {
        let next = next_level(map, disk, policy, frame, &levels[k - 1], k)?;
        levels.push(next);
    }
    levels.truncate(depth + 1);
    Ok(PuzzleTree {
        map: map.clone(),
        disk: disk.clone(),
        frame,
        policy: policy.clone(),
        levels,
        restriction: report,
    })
}

/// Like [`build_tree`], but retries on a disk shrunk by `factor` while the
/// preimage touches the boundary of `U`.
pub fn build_tree_shrinking(
    map: &PolynomialMap,
    disk: &DomainDisk,
    depth: usize,
    policy: &ResolutionPolicy,
    factor: &BigRational,
    max_attempts: usize,
) -> Result<PuzzleTree, TreeError> {
    let mut current = disk.clone();
    let mut attempt = 0;
    loop {
        match build_tree(map, &current, depth, policy) {
            Err(TreeError::HypothesisViolation {
                report: Some(report),
                ..
            }) if !report.compactly_contained
                && report.n_components >= 2
                && attempt < max_attempts =>
            {
                attempt += 1;
                current = current.shrunk(factor);
            }
            other => return other,
        }
    }
}
