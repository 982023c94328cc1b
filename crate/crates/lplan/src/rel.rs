//! Regular edge labelings: validation, sweep construction, flips and four-cycle rotation.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{common_neighbors, ekey, EmbeddedGraph, VertexId};
use crate::paths::Poles;

/// T1 edges are vertical adjacencies directed S→N, T2 horizontal ones directed W→E.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    T1,
    T2,
}

impl Label {
    pub fn other(self) -> Label {
        match self {
            Label::T1 => Label::T2,
            Label::T2 => Label::T1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Oriented {
    pub label: Label,
    pub tail: VertexId,
}

/// Role of an edge seen from one endpoint, numbered in counterclockwise block order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    T1Out = 0,
    T2In = 1,
    T1In = 2,
    T2Out = 3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rel {
    graph: Arc<EmbeddedGraph>,
    poles: Poles,
    edges: BTreeMap<(VertexId, VertexId), Oriented>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourCycle(pub [VertexId; 4]);

impl Rel {
    pub fn from_parts(
        graph: Arc<EmbeddedGraph>,
        poles: Poles,
        edges: BTreeMap<(VertexId, VertexId), Oriented>,
    ) -> Self {
        Rel {
            graph,
            poles,
            edges,
        }
    }

    pub fn graph(&self) -> &EmbeddedGraph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<EmbeddedGraph> {
        &self.graph
    }

    pub fn poles(&self) -> Poles {
        self.poles
    }

    pub fn edges(&self) -> &BTreeMap<(VertexId, VertexId), Oriented> {
        &self.edges
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> Option<Oriented> {
        self.edges.get(&ekey(u, v)).copied()
    }

    pub fn label(&self, u: VertexId, v: VertexId) -> Option<Label> {
        self.get(u, v).map(|o| o.label)
    }

    /// Tail and head of a labeled edge.
    pub fn directed(&self, u: VertexId, v: VertexId) -> Option<(VertexId, VertexId)> {
        self.get(u, v)
            .map(|o| if o.tail == u { (u, v) } else { (v, u) })
    }

    fn slot(&self, v: VertexId, u: VertexId) -> Option<Slot> {
        let o = self.get(v, u)?;
        Some(match (o.label, o.tail == v) {
            (Label::T1, true) => Slot::T1Out,
            (Label::T1, false) => Slot::T1In,
            (Label::T2, true) => Slot::T2Out,
            (Label::T2, false) => Slot::T2In,
        })
    }

    /// Checks the labeling at one vertex.
    fn check_vertex(&self, v: VertexId) -> std::result::Result<(), String> {
        let g = &self.graph;
        let p = self.poles;
        let name = g.label(v);
        if p.contains(v) {
            let want = if v == p.n {
                Slot::T1In
            } else if v == p.s {
                Slot::T1Out
            } else if v == p.w {
                Slot::T2Out
            } else {
                Slot::T2In
            };
            for &u in g.rotation(v) {
                if p.contains(u) {
                    continue;
                }
                match self.slot(v, u) {
                    Some(s) if s == want => {}
                    _ => return Err(format!("pole {name}: edge to {} has the wrong role", g.label(u))),
                }
            }
            return Ok(());
        }
        // counterclockwise order is the reversed clockwise rotation
        let mut slots = Vec::with_capacity(g.degree(v));
        for &u in g.rotation(v).iter().rev() {
            match self.slot(v, u) {
                Some(s) => slots.push(s as usize),
                None => return Err(format!("{name}: edge to {} is unlabeled", g.label(u))),
            }
        }
        let k = slots.len();
        let mut changes = 0;
        for i in 0..k {
            let (x, y) = (slots[i], slots[(i + 1) % k]);
            if x != y {
                if y != (x + 1) % 4 {
                    return Err(format!("{name}: blocks out of order"));
                }
                changes += 1;
            }
        }
        if changes != 4 {
            return Err(format!("{name}: a block is empty"));
        }
        Ok(())
    }

    /// First defect, or Ok if the labeling is regular.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let g = &self.graph;
        let p = self.poles;
        if g.outer() != [p.n, p.e, p.s, p.w] {
            return Err("outer face is not N, E, S, W".into());
        }
        for (u, v) in g.edges() {
            let both_poles = p.contains(u) && p.contains(v);
            match (both_poles, self.edges.contains_key(&(u, v))) {
                (true, true) => return Err("pole edge carries a label".into()),
                (false, false) => {
                    return Err(format!("edge {}-{} unlabeled", g.label(u), g.label(v)))
                }
                _ => {}
            }
        }
        if self.edges.len() + 4 != g.edge_count() {
            return Err("label set does not match the edge set".into());
        }
        for v in 0..g.vertex_count() {
            self.check_vertex(v)?;
        }
        Ok(())
    }

    /// Whether the labeling is regular around `v` alone.
    pub fn vertex_ok(&self, v: VertexId) -> bool {
        self.check_vertex(v).is_ok()
    }

    fn check_vertices(&self, vs: &HashSet<VertexId>) -> bool {
        vs.iter().all(|&v| self.check_vertex(v).is_ok())
    }

    /// Labeled edge list, one `tail -> head T?` line per edge.
    pub fn dump(&self) -> String {
        let g = &self.graph;
        let mut s = String::new();
        for (&(u, v), o) in &self.edges {
            let (t, h) = if o.tail == u { (u, v) } else { (v, u) };
            let _ = writeln!(s, "{} -> {} {:?}", g.label(t), g.label(h), o.label);
        }
        s
    }

    /// Toggles every listed edge, trying both rotation senses; the first that yields a
    /// regular labeling around the touched vertices wins.
    fn toggle(&self, edges: &[(VertexId, VertexId)]) -> Option<Rel> {
        let touched: HashSet<VertexId> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        for keep_t1 in [true, false] {
            let mut next = self.clone();
            for &(u, v) in edges {
                let k = ekey(u, v);
                let o = self.edges[&k];
                let head = if o.tail == k.0 { k.1 } else { k.0 };
                let keep = (o.label == Label::T1) == keep_t1;
                next.edges.insert(
                    k,
                    Oriented {
                        label: o.label.other(),
                        tail: if keep { o.tail } else { head },
                    },
                );
            }
            if next.check_vertices(&touched) {
                return Some(next);
            }
        }
        None
    }

    fn is_alternating(&self, c: &[VertexId; 4]) -> bool {
        let ls: Vec<_> = (0..4).map(|i| self.label(c[i], c[(i + 1) % 4])).collect();
        ls.iter().all(Option::is_some) && ls[0] != ls[1] && ls[1] != ls[2] && ls[2] != ls[3] && ls[3] != ls[0]
    }

    /// The four-cycle x, C, y, z around an interior edge.
    pub fn surrounding_cycle(&self, x: VertexId, y: VertexId) -> Option<[VertexId; 4]> {
        let g = &self.graph;
        if !g.has_edge(x, y) {
            return None;
        }
        let cn = common_neighbors(g, x, y);
        let faces: Vec<_> = cn
            .into_iter()
            .filter(|&w| g.cw_next(x, y) == w || g.ccw_next(x, y) == w)
            .collect();
        match faces[..] {
            [c, z] => Some([x, c, y, z]),
            _ => None,
        }
    }
}

pub fn is_valid_rel(r: &Rel) -> (bool, Option<String>) {
    match r.validate() {
        Ok(()) => (true, None),
        Err(e) => (false, Some(e)),
    }
}

pub fn is_flippable_edge(r: &Rel, x: VertexId, y: VertexId) -> bool {
    let g = r.graph();
    let p = r.poles();
    if p.contains(x) || p.contains(y) || g.degree(x) == 4 || g.degree(y) == 4 {
        return false;
    }
    r.surrounding_cycle(x, y)
        .is_some_and(|c| r.is_alternating(&c))
}

pub fn is_flippable_vertex(r: &Rel, v: VertexId) -> bool {
    let g = r.graph();
    if r.poles().contains(v) || g.degree(v) != 4 {
        return false;
    }
    let n = g.rotation(v);
    r.is_alternating(&[n[0], n[1], n[2], n[3]])
}

pub fn flip_edge(r: &Rel, x: VertexId, y: VertexId) -> Result<Rel> {
    let g = r.graph();
    if !is_flippable_edge(r, x, y) {
        return Err(Error::NotFlippable(format!("edge {}-{}", g.label(x), g.label(y))));
    }
    r.toggle(&[(x, y)])
        .ok_or_else(|| Error::NotFlippable(format!("edge {}-{}", g.label(x), g.label(y))))
}

pub fn flip_vertex(r: &Rel, v: VertexId) -> Result<Rel> {
    let g = r.graph();
    if !is_flippable_vertex(r, v) {
        return Err(Error::NotFlippable(format!("vertex {}", g.label(v))));
    }
    let es: Vec<_> = g.rotation(v).iter().map(|&u| (v, u)).collect();
    r.toggle(&es)
        .ok_or_else(|| Error::NotFlippable(format!("vertex {}", g.label(v))))
}

/// Swaps colour and direction of every edge strictly inside an alternating four-cycle.
pub fn rotate_four_cycle(r: &Rel, c: &FourCycle) -> Result<Rel> {
    let g = r.graph();
    let name = || {
        c.0.iter()
            .map(|&v| g.label(v))
            .collect::<Vec<_>>()
            .join(",")
    };
    if !r.is_alternating(&c.0) {
        return Err(Error::NotAlternating(name()));
    }
    let region = g.region_inside(&c.0)?;
    if region.edges.is_empty() {
        return Ok(r.clone());
    }
    r.toggle(&region.edges)
        .ok_or_else(|| Error::NotFlippable(format!("cycle {}", name())))
}

/// Upper neighbors of a contour vertex: strictly between its left and right contour
/// neighbors going clockwise, listed left to right.
fn fan(g: &EmbeddedGraph, x: VertexId, left: VertexId, right: VertexId) -> Vec<VertexId> {
    let mut out = Vec::new();
    let mut u = g.cw_next(x, left);
    while u != right {
        out.push(u);
        u = g.cw_next(x, u);
        if u == left {
            break;
        }
    }
    out
}

struct Sweep<'a> {
    g: &'a EmbeddedGraph,
    poles: Poles,
    budget: usize,
}

impl Sweep<'_> {
    /// Remaining checks once the fans of contour[i..=j] merged into the path `u`.
    fn run_ok(&self, contour: &[VertexId], cpos: &[usize], i: usize, j: usize, u: &[VertexId]) -> bool {
        let g = self.g;
        let n = self.poles.n;
        if u.contains(&n) && (u.len() != 1 || i != 1 || j != contour.len() - 2) {
            return false;
        }
        let in_u: HashSet<VertexId> = u.iter().copied().collect();
        let on_next = |x: VertexId| in_u.contains(&x) || (cpos[x] != usize::MAX && (cpos[x] < i || cpos[x] > j));
        let row = |k: usize| -> VertexId {
            // position k in the new contour, relative to the first new vertex
            if k == 0 {
                contour[i - 1]
            } else if k <= u.len() {
                u[k - 1]
            } else {
                contour[j + 1 + (k - u.len() - 1)]
            }
        };
        // each new vertex touches the new contour only at its path neighbors
        for k in 1..=u.len() {
            let (l, w, r) = (row(k - 1), row(k), row(k + 1));
            if g.rotation(w).iter().any(|&x| x != l && x != r && on_next(x)) {
                return false;
            }
        }
        if u == [n] {
            return true;
        }
        // every inner contour vertex still needs a nonempty fan
        let left = |k: usize| if k == 0 { (i >= 2).then(|| contour[i - 2]) } else { Some(row(k - 1)) };
        for k in 0..=u.len() + 1 {
            let x = row(k);
            if x == self.poles.w || x == self.poles.e {
                continue;
            }
            let Some(l) = left(k) else { continue };
            let r = if k == u.len() + 1 {
                contour.get(j + 2).copied()
            } else {
                Some(row(k + 1))
            };
            let Some(r) = r else { continue };
            if g.cw_next(x, l) == r {
                return false;
            }
        }
        true
    }

    fn apply(
        &self,
        contour: &[VertexId],
        i: usize,
        j: usize,
        u: &[VertexId],
        edges: &mut BTreeMap<(VertexId, VertexId), Oriented>,
        added: &mut Vec<(VertexId, VertexId)>,
    ) -> Vec<VertexId> {
        let g = self.g;
        let mut put = |a: VertexId, b: VertexId, label: Label| {
            if !(self.poles.contains(a) && self.poles.contains(b)) {
                edges.insert(ekey(a, b), Oriented { label, tail: a });
                added.push(ekey(a, b));
            }
        };
        for &x in &contour[i..=j] {
            for &w in u {
                if g.has_edge(x, w) {
                    put(x, w, Label::T1);
                }
            }
        }
        let mut row = vec![contour[i - 1]];
        row.extend(u);
        row.push(contour[j + 1]);
        for k in 0..row.len() - 1 {
            put(row[k], row[k + 1], Label::T2);
        }
        let mut next = contour[..i].to_vec();
        next.extend(u);
        next.extend(&contour[j + 1..]);
        next
    }

    fn run(
        &mut self,
        contour: Vec<VertexId>,
        placed: &mut Vec<bool>,
        edges: &mut BTreeMap<(VertexId, VertexId), Oriented>,
    ) -> bool {
        if contour == [self.poles.w, self.poles.n, self.poles.e] {
            return true;
        }
        let g = self.g;
        let len = contour.len();
        let mut cpos = vec![usize::MAX; g.vertex_count()];
        for (k, &x) in contour.iter().enumerate() {
            cpos[x] = k;
        }
        for i in 1..len - 1 {
            let mut u: Vec<VertexId> = Vec::new();
            let mut seen = HashSet::new();
            for j in i..len - 1 {
                let f = fan(g, contour[j], contour[j - 1], contour[j + 1]);
                if f.is_empty() {
                    break;
                }
                let fresh = if u.is_empty() {
                    &f[..]
                } else if f[0] == *u.last().unwrap() {
                    &f[1..]
                } else {
                    break;
                };
                if fresh.iter().any(|&w| placed[w] || !seen.insert(w)) {
                    break;
                }
                u.extend(fresh);
                if !self.run_ok(&contour, &cpos, i, j, &u) {
                    continue;
                }
                if self.budget == 0 {
                    return false;
                }
                self.budget -= 1;
                let mut added = Vec::new();
                let next = self.apply(&contour, i, j, &u, edges, &mut added);
                for &w in &u {
                    placed[w] = true;
                }
                if self.run(next, placed, edges) {
                    return true;
                }
                for &w in &u {
                    placed[w] = false;
                }
                for k in added {
                    edges.remove(&k);
                }
            }
        }
        false
    }
}

/// Builds a REL by sweeping a W→E contour upward from S to N.
pub fn construct_rel(graph: Arc<EmbeddedGraph>, poles: Poles) -> Result<Rel> {
    let g = &*graph;
    if g.outer() != [poles.n, poles.e, poles.s, poles.w] {
        return Err(Error::NotConstructible("outer face is not N, E, S, W".into()));
    }
    let mut placed = vec![false; g.vertex_count()];
    for v in [poles.w, poles.s, poles.e] {
        placed[v] = true;
    }
    let mut edges = BTreeMap::new();
    let mut sweep = Sweep {
        g,
        poles,
        budget: 64 * g.vertex_count() * g.vertex_count(),
    };
    let done = sweep.run(vec![poles.w, poles.s, poles.e], &mut placed, &mut edges);
    if !done {
        return Err(Error::NotConstructible(
            "no admissible sweep order (separating triangle or bad four-completion)".into(),
        ));
    }
    let rel = Rel {
        graph,
        poles,
        edges,
    };
    rel.validate().map_err(Error::NotConstructible)?;
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_drawing;
    use crate::paths::four_complete;

    /// Four poles around one interior vertex.
    fn single() -> (Arc<EmbeddedGraph>, Poles) {
        let g = from_drawing(
            &["v", "N", "E", "S", "W"],
            &[(0.0, 0.0), (0.0, 5.0), (5.0, 0.0), (0.0, -5.0), (-5.0, 0.0)],
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)],
        )
        .unwrap();
        let g = g.with_outer_start(1).unwrap();
        (Arc::new(g), Poles { n: 1, e: 2, s: 3, w: 4 })
    }

    #[test]
    fn single_vertex_rel_is_forced() {
        let (g, p) = single();
        let r = construct_rel(g, p).unwrap();
        assert_eq!(r.directed(0, 1), Some((0, 1)));
        assert_eq!(r.label(0, 1), Some(Label::T1));
        assert_eq!(r.directed(3, 0), Some((3, 0)));
        assert_eq!(r.directed(4, 0), Some((4, 0)));
        assert_eq!(r.label(4, 0), Some(Label::T2));
        assert_eq!(r.directed(0, 2), Some((0, 2)));
        assert!(is_valid_rel(&r).0);
    }

    fn grid() -> (Arc<EmbeddedGraph>, Poles) {
        // 2x2 block of squares triangulated along one diagonal each
        let labels = ["a", "b", "c", "d", "e", "f"];
        let pts = [(0.0, 0.0), (4.0, 0.0), (8.0, 0.0), (0.0, 4.0), (4.0, 4.0), (8.0, 4.0)];
        let edges = [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5), (0, 4), (1, 5)];
        let g = from_drawing(&labels, &pts, &edges).unwrap();
        let ids = |ls: &[&str]| ls.iter().map(|l| g.find(l).unwrap()).collect::<Vec<_>>();
        let paths = [ids(&["d", "e", "f"]), ids(&["f", "c"]), ids(&["c", "b", "a"]), ids(&["a", "d"])];
        let fc = four_complete(&g, &paths).unwrap();
        (Arc::new(fc.graph), fc.poles)
    }

    #[test]
    fn sweep_builds_valid_rel() {
        let (g, p) = grid();
        let r = construct_rel(g, p).unwrap();
        assert_eq!(r.validate(), Ok(()));
    }

    #[test]
    fn toggled_label_is_detected() {
        let (g, p) = grid();
        let r = construct_rel(g, p).unwrap();
        for (&k, &o) in r.edges() {
            let mut bad = r.clone();
            bad.edges.insert(k, Oriented { label: o.label.other(), tail: o.tail });
            assert!(!is_valid_rel(&bad).0);
        }
    }

    #[test]
    fn flips_are_involutions() {
        let (g, p) = grid();
        let r = construct_rel(g, p).unwrap();
        let gg = r.graph().clone();
        for (u, v) in gg.edges() {
            if is_flippable_edge(&r, u, v) {
                let f = flip_edge(&r, u, v).unwrap();
                assert!(f.validate().is_ok());
                assert_ne!(f.label(u, v), r.label(u, v));
                assert_eq!(flip_edge(&f, u, v).unwrap(), r);
            }
        }
    }
}
