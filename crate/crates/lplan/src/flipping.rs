//! Flipping toward (a,b) ∈ T1 and (b,c) ∈ T2, with alternating four-cycle rotation on repeats.

use std::collections::HashSet;

use serde::Serialize;

use crate::boundary::Triplet;
use crate::error::{Error, Result};
use crate::graph::{common_neighbors, ekey, VertexId};
use crate::rel::{flip_edge, flip_vertex, is_flippable_vertex, rotate_four_cycle, FourCycle, Label, Rel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Action {
    Flip(VertexId, VertexId),
    FlipVertex(VertexId),
    Rotate([VertexId; 4]),
}

/// Edges selected for flipping, with the common neighbor each was reached through.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlipWorklist {
    pub a: Vec<(VertexId, VertexId)>,
    pub c: Vec<VertexId>,
    /// Case (b) entries: their new common neighbor z.
    single_child: Vec<Option<VertexId>>,
    z: Vec<Option<VertexId>>,
}

impl FlipWorklist {
    fn push(&mut self, x: VertexId, y: VertexId, c: VertexId) {
        self.a.push((x, y));
        self.c.push(c);
        self.single_child.push(None);
        self.z.push(None);
    }

    fn truncate(&mut self, n: usize) {
        self.a.truncate(n);
        self.c.truncate(n);
        self.single_child.truncate(n);
        self.z.truncate(n);
    }

    fn pos(&self, x: VertexId, y: VertexId) -> Option<usize> {
        let k = ekey(x, y);
        self.a.iter().position(|&(u, v)| ekey(u, v) == k)
    }
}

/// Binary tree over selected edges: each node's children are the edges pushed while it
/// was on top of the worklist.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FlipTree {
    pub nodes: Vec<(VertexId, VertexId)>,
    pub parent: Vec<Option<usize>>,
}

impl FlipTree {
    pub fn children(&self, i: usize) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&j| self.parent[j] == Some(i)).collect()
    }

    pub fn max_children(&self) -> usize {
        (0..self.nodes.len()).map(|i| self.children(i).len()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FlipTrace {
    pub actions: Vec<Action>,
    pub steps: usize,
    pub tree: Option<FlipTree>,
}

/// How the top of the worklist proceeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Advance {
    Flippable,
    /// Both new edges carry the other label: descend to (z, y) via x.
    DescendZY(VertexId),
    /// (x,z) shares the label of (x,y): descend to (x, z) via y.
    DescendXZ(VertexId),
}

/// Orients (x, y) so that (x,y) and (x,C) share a label and (y,C) has the other one.
fn orient(r: &Rel, x: VertexId, y: VertexId, c: VertexId) -> Option<(VertexId, VertexId)> {
    let (xy, xc, yc) = (r.label(x, y)?, r.label(x, c)?, r.label(y, c)?);
    if xy == xc && xy != yc {
        Some((x, y))
    } else if xy == yc && xy != xc {
        Some((y, x))
    } else {
        None
    }
}

/// The common neighbor of x and y other than `c`.
fn new_common(r: &Rel, x: VertexId, y: VertexId, c: VertexId) -> Result<VertexId> {
    let g = r.graph();
    let cn = common_neighbors(g, x, y);
    if cn.len() != 2 || !cn.contains(&c) {
        return Err(Error::OracleViolation(format!(
            "edge {}-{} has {} common neighbors",
            g.label(x),
            g.label(y),
            cn.len()
        )));
    }
    Ok(if cn[0] == c { cn[1] } else { cn[0] })
}

/// Classifies an oriented worklist entry.
pub fn advance(r: &Rel, x: VertexId, y: VertexId, c: VertexId) -> Result<(Advance, VertexId)> {
    let z = new_common(r, x, y, c)?;
    let lx = r.label(x, y).unwrap();
    let (xz, yz) = (r.label(x, z), r.label(y, z));
    let (Some(xz), Some(yz)) = (xz, yz) else {
        return Err(Error::NormalizationFailed("chain reached a pole edge".into()));
    };
    let other = lx.other();
    match (xz == other, yz == other) {
        (true, false) => Ok((Advance::Flippable, z)),
        (true, true) => Ok((Advance::DescendZY(z), z)),
        (false, true) => Ok((Advance::DescendXZ(z), z)),
        (false, false) => Err(Error::OracleViolation("monochromatic triangle pair".into())),
    }
}

pub struct Normalizer {
    pub trace: FlipTrace,
    budget: usize,
    record_tree: bool,
}

fn is_target(r: &Rel, t: &Triplet) -> bool {
    r.label(t.a, t.b) == Some(Label::T1) && r.label(t.b, t.c) == Some(Label::T2)
}

/// The first edge of a chain, with the pre-rotation at the concave corner.
pub fn pick_first_edge(r: &Rel, t: &Triplet, ne: VertexId) -> Option<((VertexId, VertexId), VertexId)> {
    match (r.label(t.a, t.b)?, r.label(t.b, t.c)?) {
        (Label::T1, Label::T1) => {
            if r.label(t.c, ne) == Some(Label::T2) {
                Some(((ne, t.c), t.b))
            } else {
                Some(((t.b, t.c), ne))
            }
        }
        (Label::T2, Label::T2) => {
            if r.label(t.a, ne) == Some(Label::T1) {
                Some(((t.a, ne), t.b))
            } else {
                Some(((t.a, t.b), ne))
            }
        }
        _ => None,
    }
}

impl Normalizer {
    pub fn new(edge_count: usize, record_tree: bool) -> Self {
        Normalizer {
            trace: FlipTrace {
                tree: record_tree.then(FlipTree::default),
                ..Default::default()
            },
            budget: 4 * edge_count * edge_count,
            record_tree,
        }
    }

    fn tick(&mut self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::NormalizationFailed("step budget exhausted".into()));
        }
        self.budget -= 1;
        self.trace.steps += 1;
        Ok(())
    }

    fn flip(&mut self, r: &Rel, x: VertexId, y: VertexId) -> Result<Rel> {
        let p = r.poles();
        if p.contains(x) || p.contains(y) {
            return Err(Error::NormalizationFailed("chain selected a pole edge".into()));
        }
        match flip_edge(r, x, y) {
            Ok(n) => {
                self.trace.actions.push(Action::Flip(x, y));
                Ok(n)
            }
            Err(e) => {
                // an alternating cycle around an edge at a degree-4 vertex is that vertex's flip
                for v in [x, y] {
                    if is_flippable_vertex(r, v) {
                        let n = flip_vertex(r, v)?;
                        self.trace.actions.push(Action::FlipVertex(v));
                        return Ok(n);
                    }
                }
                Err(e)
            }
        }
    }

    /// Finds an alternating four-cycle that encloses the repeated edge and rotates it.
    fn resolve_repeat(&mut self, r: &Rel, wl: &FlipWorklist, j: usize, edge: (VertexId, VertexId)) -> Result<Rel> {
        let zs: Vec<VertexId> = (j..wl.a.len()).filter_map(|i| wl.single_child[i]).collect();
        let mut wide: Vec<VertexId> = Vec::new();
        for i in j..wl.a.len() {
            let (x, y) = wl.a[i];
            wide.extend([x, y, wl.c[i]]);
            wide.extend(wl.z[i]);
        }
        for pool in [zs, wide] {
            let mut pool: Vec<VertexId> = pool.into_iter().filter(|&v| !r.poles().contains(v)).collect();
            pool.sort_unstable();
            pool.dedup();
            if let Some(c) = find_cycle(r, &pool, edge) {
                let n = rotate_four_cycle(r, &FourCycle(c))?;
                self.trace.actions.push(Action::Rotate(c));
                return Ok(n);
            }
        }
        Err(Error::CycleNotFound(format!(
            "edge {}-{}",
            r.graph().label(edge.0),
            r.graph().label(edge.1)
        )))
    }

    /// Runs one chain from a first edge. Returns the new labeling; the caller re-checks the
    /// triplet labels.
    fn chain(&mut self, mut r: Rel, first: (VertexId, VertexId), c0: VertexId) -> Result<Rel> {
        let mut wl = FlipWorklist::default();
        let mut on_list: HashSet<(VertexId, VertexId)> = HashSet::new();
        let mut tree_ids: Vec<usize> = Vec::new();
        wl.push(first.0, first.1, c0);
        on_list.insert(ekey(first.0, first.1));
        self.tree_push(first, None, &mut tree_ids);
        while let Some(top) = wl.a.len().checked_sub(1) {
            self.tick()?;
            let (x, y) = wl.a[top];
            let c = wl.c[top];
            let Some((x, y)) = orient(&r, x, y, c) else {
                // labels moved under us; let the outer loop re-classify
                return Ok(r);
            };
            wl.a[top] = (x, y);
            let (step, z) = advance(&r, x, y, c)?;
            wl.z[top] = Some(z);
            let next = match step {
                Advance::Flippable => {
                    r = self.flip(&r, x, y)?;
                    on_list.remove(&ekey(x, y));
                    wl.truncate(top);
                    tree_ids.truncate(top);
                    continue;
                }
                Advance::DescendZY(z) => {
                    wl.single_child[top] = Some(z);
                    (z, y, x)
                }
                Advance::DescendXZ(z) => (x, z, y),
            };
            let (nx, ny, nc) = next;
            if r.poles().contains(nx) || r.poles().contains(ny) {
                return Err(Error::NormalizationFailed("chain reached a pole edge".into()));
            }
            if on_list.contains(&ekey(nx, ny)) {
                let j = wl.pos(nx, ny).unwrap();
                r = self.resolve_repeat(&r, &wl, j, (nx, ny))?;
                for i in j..wl.a.len() {
                    on_list.remove(&ekey(wl.a[i].0, wl.a[i].1));
                }
                wl.truncate(j);
                tree_ids.truncate(j);
                continue;
            }
            let parent = tree_ids.last().copied();
            wl.push(nx, ny, nc);
            on_list.insert(ekey(nx, ny));
            self.tree_push((nx, ny), parent, &mut tree_ids);
        }
        Ok(r)
    }

    fn tree_push(&mut self, e: (VertexId, VertexId), parent: Option<usize>, ids: &mut Vec<usize>) {
        if !self.record_tree {
            return;
        }
        let t = self.trace.tree.as_mut().unwrap();
        t.nodes.push(e);
        t.parent.push(parent);
        ids.push(t.nodes.len() - 1);
    }

    pub fn run(&mut self, mut r: Rel, t: &Triplet, ne: VertexId) -> Result<Rel> {
        loop {
            if is_target(&r, t) {
                return Ok(r);
            }
            let Some((first, c0)) = pick_first_edge(&r, t, ne) else {
                return Err(Error::NormalizationFailed(
                    "(a,b) horizontal and (b,c) vertical: concave corner is not North-East".into(),
                ));
            };
            if orient(&r, first.0, first.1, c0).is_none() {
                return Err(Error::NormalizationFailed("first edge cannot be oriented".into()));
            }
            self.tick()?;
            r = self.chain(r, first, c0)?;
        }
    }
}

/// Alternating four-cycle on `pool` whose interior contains `edge`.
fn find_cycle(r: &Rel, pool: &[VertexId], edge: (VertexId, VertexId)) -> Option<[VertexId; 4]> {
    let g = r.graph();
    let k = pool.len();
    if k > 40 {
        return None;
    }
    let target = ekey(edge.0, edge.1);
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                for m in l + 1..k {
                    let (p, q, s, u) = (pool[i], pool[j], pool[l], pool[m]);
                    for c in [[p, q, s, u], [p, q, u, s], [p, s, q, u]] {
                        if !(0..4).all(|t| g.has_edge(c[t], c[(t + 1) % 4])) {
                            continue;
                        }
                        let ls: Vec<_> = (0..4).map(|t| r.label(c[t], c[(t + 1) % 4])).collect();
                        if ls.iter().any(Option::is_none) || (0..4).any(|t| ls[t] == ls[(t + 1) % 4]) {
                            continue;
                        }
                        // orient the cycle so its interior is the bounded side
                        for cyc in [c, [c[0], c[3], c[2], c[1]]] {
                            if let Ok(reg) = g.region_inside(&cyc) {
                                if reg.edges.contains(&target) {
                                    return Some(cyc);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Produces a REL with (a,b) ∈ T1 and (b,c) ∈ T2.
pub fn normalize_labels(r: &Rel, t: &Triplet, ne: VertexId) -> Result<Rel> {
    normalize_traced(r, t, ne, false).map(|(r, _)| r)
}

pub fn normalize_traced(r: &Rel, t: &Triplet, ne: VertexId, tree: bool) -> Result<(Rel, FlipTrace)> {
    let mut nz = Normalizer::new(r.graph().edge_count(), tree);
    let out = nz.run(r.clone(), t, ne)?;
    out.validate().map_err(Error::NormalizationFailed)?;
    Ok((out, nz.trace))
}
