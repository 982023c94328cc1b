//! Five-path boundary selection, NE insertion and four-completion.

use std::collections::HashSet;

use serde::Serialize;

use crate::boundary::{find_cips, find_shortcuts, Cip, Triplet};
use crate::error::{Error, Result};
use crate::graph::{common_neighbors, validate_ptpg, EmbeddedGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathSet {
    /// P1..P5 in clockwise order. Consecutive paths share an end vertex; a path may be a
    /// single vertex.
    pub paths: [Vec<VertexId>; 5],
    pub triplet: Triplet,
}

impl PathSet {
    pub fn p(&self, i: usize) -> &[VertexId] {
        &self.paths[i - 1]
    }

    /// Offsets of the split points α2..α5 measured clockwise from α1.
    fn from_offsets(g: &EmbeddedGraph, alpha1: VertexId, d: [usize; 4], t: Triplet) -> Self {
        let o = g.outer();
        let m = o.len();
        let s = g.outer_position(alpha1).unwrap();
        let bounds = [0, d[0], d[1], d[2], d[3], m];
        let paths = std::array::from_fn(|i| {
            (bounds[i]..=bounds[i + 1])
                .map(|k| o[(s + k) % m])
                .collect::<Vec<_>>()
        });
        PathSet { paths, triplet: t }
    }

    pub fn labels(&self, g: &EmbeddedGraph) -> Vec<Vec<String>> {
        self.paths
            .iter()
            .map(|p| p.iter().map(|&v| g.label(v).to_string()).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    FourConsecutiveCommonVertex,
    ShortcutP5Side,
    ShortcutP2Side,
    CommonNeighborAcross,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathViolation {
    pub kind: ViolationKind,
    pub witness: Vec<VertexId>,
}

/// Checks the four characteristic conditions a path set needs for a non-trivial L.
pub fn check_path_conditions(g: &EmbeddedGraph, ps: &PathSet) -> Vec<PathViolation> {
    let mut out = Vec::new();
    let Triplet { a, b, c } = ps.triplet;
    let p1 = &ps.paths[0];
    let (Some(ia), Some(ic)) = (
        p1.iter().position(|&v| v == a),
        p1.iter().position(|&v| v == c),
    ) else {
        return out;
    };

    // (i) a vertex common to four consecutive paths
    let sets: Vec<HashSet<VertexId>> = ps.paths.iter().map(|p| p.iter().copied().collect()).collect();
    let mut seen = HashSet::new();
    for k in 0..5 {
        for &v in &ps.paths[k] {
            if (1..4).all(|j| sets[(k + j) % 5].contains(&v)) && seen.insert(v) {
                out.push(PathViolation {
                    kind: ViolationKind::FourConsecutiveCommonVertex,
                    witness: vec![v],
                });
            }
        }
    }

    let shortcuts: Vec<(VertexId, VertexId)> = find_shortcuts(g).iter().map(|s| (s.u, s.v)).collect();
    let linked = |x: VertexId, y: VertexId| {
        shortcuts.iter().any(|&(u, v)| (u, v) == (x, y) || (u, v) == (y, x))
    };
    // (ii) P5 against c and the part of P1 after c
    for &x in &ps.paths[4] {
        for &y in &p1[ic..] {
            if x != y && linked(x, y) {
                out.push(PathViolation {
                    kind: ViolationKind::ShortcutP5Side,
                    witness: vec![x, y],
                });
            }
        }
    }
    // (iii) P2 against a and the part of P1 before a
    for &x in &ps.paths[1] {
        for &y in &p1[..=ia] {
            if x != y && linked(x, y) {
                out.push(PathViolation {
                    kind: ViolationKind::ShortcutP2Side,
                    witness: vec![x, y],
                });
            }
        }
    }
    // (iv) a common neighbor other than b across the triplet
    for &x in &p1[..=ia] {
        for &y in &p1[ic..] {
            if x == y {
                continue;
            }
            for w in common_neighbors(g, x, y) {
                if w != b {
                    out.push(PathViolation {
                        kind: ViolationKind::CommonNeighborAcross,
                        witness: vec![x, y, w],
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Infeasible {
    pub triplet: Triplet,
    pub cip_count: usize,
    /// The only admissible path set when the boundary has five CIPs.
    pub forced: Option<PathSet>,
    pub violations: Vec<PathViolation>,
    pub reason: String,
}

impl From<Infeasible> for Error {
    fn from(i: Infeasible) -> Self {
        Error::Infeasible(i.triplet.a, i.triplet.b, i.triplet.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Poles {
    pub n: VertexId,
    pub e: VertexId,
    pub s: VertexId,
    pub w: VertexId,
}

impl Poles {
    pub fn contains(&self, v: VertexId) -> bool {
        v == self.n || v == self.e || v == self.s || v == self.w
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourCompleted {
    pub graph: EmbeddedGraph,
    pub poles: Poles,
    /// Boundary paths adjacent to N, E, S, W.
    pub paths: [Vec<VertexId>; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedGraph {
    pub base: EmbeddedGraph,
    /// G with NE added, before or after four-completion.
    pub graph: EmbeddedGraph,
    pub ne: VertexId,
    pub pprime: [Vec<VertexId>; 4],
    pub poles: Option<Poles>,
}

/// A label not yet used in `g`, derived from `want`.
pub fn fresh_label(g: &EmbeddedGraph, want: &str) -> String {
    let mut l = want.to_string();
    while g.find(&l).is_some() {
        l.push('\'');
    }
    l
}

pub fn augment_with_ne(g: &EmbeddedGraph, ps: &PathSet) -> Result<AugmentedGraph> {
    let (gp, ne) = g.insert_outer_vertex(&fresh_label(g, "NE"), &ps.paths[0])?;
    let mut p1 = ps.paths[4].clone();
    p1.push(ne);
    let mut p2 = vec![ne];
    p2.extend(&ps.paths[1]);
    Ok(AugmentedGraph {
        base: g.clone(),
        graph: gp,
        ne,
        pprime: [p1, p2, ps.paths[2].clone(), ps.paths[3].clone()],
        poles: None,
    })
}

/// Adds N, E, S, W over four clockwise boundary paths so the outer face becomes N, E, S, W.
pub fn four_complete(g: &EmbeddedGraph, paths: &[Vec<VertexId>; 4]) -> Result<FourCompleted> {
    for i in 0..4 {
        if paths[i].is_empty() || paths[i].last() != paths[(i + 1) % 4].first() {
            return Err(Error::EmbeddingConflict(
                "boundary paths must be consecutive".into(),
            ));
        }
    }
    let (g1, n) = g.insert_outer_vertex(&fresh_label(g, "N"), &paths[0])?;
    let run: Vec<_> = std::iter::once(n).chain(paths[1].iter().copied()).collect();
    let (g2, e) = g1.insert_outer_vertex(&fresh_label(&g1, "E"), &run)?;
    let run: Vec<_> = std::iter::once(e).chain(paths[2].iter().copied()).collect();
    let (g3, s) = g2.insert_outer_vertex(&fresh_label(&g2, "S"), &run)?;
    let run: Vec<_> = std::iter::once(s)
        .chain(paths[3].iter().copied())
        .chain(std::iter::once(n))
        .collect();
    let (g4, w) = g3.insert_outer_vertex(&fresh_label(&g3, "W"), &run)?;
    Ok(FourCompleted {
        graph: g4.with_outer_start(n)?,
        poles: Poles { n, e, s, w },
        paths: paths.clone(),
    })
}

pub fn four_completion(ag: &AugmentedGraph) -> Result<AugmentedGraph> {
    let fc = four_complete(&ag.graph, &ag.pprime)?;
    Ok(AugmentedGraph {
        base: ag.base.clone(),
        graph: fc.graph,
        ne: ag.ne,
        pprime: ag.pprime.clone(),
        poles: Some(fc.poles),
    })
}

/// Four-completion of G itself: one corner inside each of the first four CIPs, the
/// remaining corners taken from the boundary in canonical order.
pub fn four_complete_plain(g: &EmbeddedGraph) -> Result<FourCompleted> {
    let mut corners: Vec<VertexId> = Vec::new();
    for cip in find_cips(g).iter().take(4) {
        if let Some(&v) = cip.inner().iter().find(|v| !corners.contains(v)) {
            corners.push(v);
        }
    }
    for v in crate::boundary::canonical_outer(g) {
        if corners.len() >= 4 {
            break;
        }
        if !corners.contains(&v) {
            corners.push(v);
        }
    }
    if corners.len() < 4 {
        return Err(Error::EmbeddingConflict(
            "outer face too short for four corners".into(),
        ));
    }
    corners.sort_by_key(|&v| g.outer_position(v));
    let paths: [Vec<VertexId>; 4] = std::array::from_fn(|i| {
        crate::boundary::outer_arc(g, corners[i], corners[(i + 1) % 4])
    });
    let fc = four_complete(g, &paths)?;
    if !validate_ptpg(&fc.graph).passed() {
        return Err(Error::EmbeddingConflict(
            "four-completed graph has a separating triangle".into(),
        ));
    }
    Ok(fc)
}

/// NE insertion plus four-completion, accepted only if both graphs are PTPGs.
pub fn build_completed(g: &EmbeddedGraph, ps: &PathSet) -> Result<AugmentedGraph> {
    let ag = augment_with_ne(g, ps)?;
    if !validate_ptpg(&ag.graph).passed() {
        return Err(Error::EmbeddingConflict("G' is not a PTPG".into()));
    }
    let done = four_completion(&ag)?;
    if !validate_ptpg(&done.graph).passed() {
        return Err(Error::EmbeddingConflict(
            "four-completed graph has a separating triangle".into(),
        ));
    }
    Ok(done)
}

fn usable(g: &EmbeddedGraph, ps: &PathSet) -> bool {
    check_path_conditions(g, ps).is_empty() && build_completed(g, ps).is_ok()
}

fn dist(g: &EmbeddedGraph, u: VertexId, v: VertexId) -> usize {
    let m = g.outer().len();
    let (i, j) = (g.outer_position(u).unwrap(), g.outer_position(v).unwrap());
    (j + m - i) % m
}

/// One vertex strictly inside each CIP: a if possible, then c, then the first inner vertex.
pub fn cip_corners(cips: &[Cip], t: &Triplet) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::new();
    for cip in cips {
        let inner = cip.inner();
        let pick = if inner.contains(&t.a) {
            t.a
        } else if inner.contains(&t.c) {
            t.c
        } else {
            *inner.iter().find(|&&v| v != t.b).unwrap_or(&inner[0])
        };
        if !out.contains(&pick) {
            out.push(pick);
        }
    }
    out
}

/// Path set produced by cutting the boundary at the given corners, P1 being the path
/// that has b strictly inside.
fn cut_at(g: &EmbeddedGraph, corners: &[VertexId], t: Triplet) -> Option<PathSet> {
    if corners.len() != 5 {
        return None;
    }
    let mut cs = corners.to_vec();
    cs.sort_by_key(|&v| dist(g, t.b, v));
    let alpha1 = cs[4];
    if alpha1 == t.b || cs[0] == t.b {
        return None;
    }
    let mut d = [0; 4];
    for i in 0..4 {
        d[i] = dist(g, alpha1, cs[i]);
    }
    Some(PathSet::from_offsets(g, alpha1, d, t))
}

/// Splits non-P1 paths at extra points, clockwise-first, returning the first usable set.
fn complete_splits(
    g: &EmbeddedGraph,
    t: Triplet,
    alpha1: VertexId,
    d2: usize,
    fixed: &[usize],
) -> Option<PathSet> {
    let m = g.outer().len();
    let extras = 3usize.checked_sub(fixed.len())?;
    let mut pick = vec![d2; extras];
    loop {
        let mut d: Vec<usize> = fixed.iter().chain(pick.iter()).copied().collect();
        d.sort_unstable();
        let ps = PathSet::from_offsets(g, alpha1, [d2, d[0], d[1], d[2]], t);
        if usable(g, &ps) {
            return Some(ps);
        }
        // next non-decreasing tuple in [d2, m]
        let mut i = extras;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if pick[i] < m {
                pick[i] += 1;
                let v = pick[i];
                for p in pick.iter_mut().skip(i + 1) {
                    *p = v;
                }
                break;
            }
        }
    }
}

/// Split the CIP-delimited path holding the triplet at a or at c, then finish the
/// remaining splits; fewest P1 vertices wins, ties go to the split at a.
fn corner_candidates(g: &EmbeddedGraph, t: Triplet, corners: &[VertexId]) -> Option<PathSet> {
    let m = g.outer().len();
    if corners.len() < 2 {
        return None;
    }
    let s = *corners.iter().min_by_key(|&&x| dist(g, x, t.b)).unwrap();
    let e = *corners.iter().min_by_key(|&&x| dist(g, t.b, x)).unwrap();
    let others: Vec<_> = corners.iter().copied().filter(|&x| x != s && x != e).collect();
    if dist(g, s, t.a) > dist(g, s, t.b) || dist(g, t.c, e) > dist(g, t.b, e) {
        return None;
    }
    // split at a: P5 = s..a, P1 = a..e
    let at_a = {
        let d2 = dist(g, t.a, e);
        let mut fixed: Vec<_> = others.iter().map(|&x| dist(g, t.a, x)).collect();
        fixed.push(m - dist(g, s, t.a));
        complete_splits(g, t, t.a, d2, &fixed)
    };
    // split at c: P1 = s..c, P2 = c..e
    let at_c = {
        let d2 = dist(g, s, t.c);
        let mut fixed: Vec<_> = others.iter().map(|&x| dist(g, s, x)).collect();
        fixed.push(dist(g, s, e));
        complete_splits(g, t, s, d2, &fixed)
    };
    match (at_a, at_c) {
        (Some(x), Some(y)) => Some(if y.paths[0].len() < x.paths[0].len() { y } else { x }),
        (x, y) => x.or(y),
    }
}

/// Upper bound on path sets examined by the exhaustive fallback.
const SEARCH_BUDGET: usize = 200_000;

/// Exhaustive fallback: P1 grows outward from (a,b,c); then α3 ascending, α4
/// ascending, α5 descending.
fn generic_search(g: &EmbeddedGraph, t: Triplet) -> Option<PathSet> {
    let m = g.outer().len();
    let o = g.outer();
    let pa = g.outer_position(t.a).unwrap();
    let mut budget = SEARCH_BUDGET;
    for extra in 0..=m.saturating_sub(5) {
        for back in 0..=extra {
            let fwd = extra - back;
            let alpha1 = o[(pa + m - back) % m];
            let d2 = back + 2 + fwd;
            if d2 + 2 > m {
                continue;
            }
            for d3 in d2..=m {
                for d4 in d3..=m {
                    for d5 in (d4..=m).rev() {
                        if budget == 0 {
                            return None;
                        }
                        budget -= 1;
                        let ps = PathSet::from_offsets(g, alpha1, [d2, d3, d4, d5], t);
                        if usable(g, &ps) {
                            return Some(ps);
                        }
                    }
                }
            }
        }
    }
    None
}

/// Chooses P1..P5 for the triplet, or explains why no set exists.
pub fn select_paths(g: &EmbeddedGraph, t: Triplet) -> std::result::Result<PathSet, Infeasible> {
    let cips = find_cips(g);
    let k = cips.len();
    let fail = |forced: Option<PathSet>, violations, reason: &str| Infeasible {
        triplet: t,
        cip_count: k,
        forced,
        violations,
        reason: reason.to_string(),
    };
    if k > 5 {
        return Err(fail(None, vec![], "more than five corner implying paths"));
    }
    let corners = cip_corners(&cips, &t);
    if k == 5 {
        let Some(ps) = cut_at(g, &corners, t) else {
            return Err(fail(None, vec![], "five CIPs do not yield five distinct corners"));
        };
        let violations = check_path_conditions(g, &ps);
        if !violations.is_empty() {
            return Err(fail(
                Some(ps),
                violations,
                "the path set forced by five CIPs violates the path conditions",
            ));
        }
        if let Err(e) = build_completed(g, &ps) {
            return Err(fail(Some(ps), vec![], &e.to_string()));
        }
        return Ok(ps);
    }
    corner_candidates(g, t, &corners)
        .or_else(|| generic_search(g, t))
        .ok_or_else(|| fail(None, vec![], "no path set satisfies the path conditions"))
}
