//! Rectangular floor-plans from a REL, NE removal and the non-triviality check.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use petgraph::algo::toposort;
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EmbeddedGraph, VertexId};
use crate::rel::Rel;

pub type Point = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub w: i64,
    pub h: i64,
}

impl Rect {
    pub fn right(&self) -> i64 {
        self.x + self.w
    }

    pub fn top(&self) -> i64 {
        self.y + self.h
    }

    pub fn area(&self) -> i64 {
        self.w * self.h
    }

    fn overlaps(&self, o: &Rect) -> bool {
        self.x < o.right() && o.x < self.right() && self.y < o.top() && o.y < self.top()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Adjacency {
    /// Shared horizontal wall: one module sits on top of the other.
    Vertical,
    /// Shared vertical wall: side by side.
    Horizontal,
}

/// How two rectangles touch: a shared wall of positive length, a single point, or not at all.
fn contact(a: &Rect, b: &Rect) -> Option<std::result::Result<Adjacency, ()>> {
    let xt = a.right() == b.x || b.right() == a.x;
    let yt = a.top() == b.y || b.top() == a.y;
    let xo = a.right().min(b.right()) - a.x.max(b.x);
    let yo = a.top().min(b.top()) - a.y.max(b.y);
    if xt && yo > 0 {
        Some(Ok(Adjacency::Horizontal))
    } else if yt && xo > 0 {
        Some(Ok(Adjacency::Vertical))
    } else if xt && yt && xo == 0 && yo == 0 {
        Some(Err(()))
    } else {
        None
    }
}

/// Modules keyed by label, plus the counterclockwise outline starting at its lowest-leftmost corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FloorPlan {
    pub modules: BTreeMap<String, Rect>,
    pub outline: Vec<Point>,
}

impl FloorPlan {
    /// Checks the modules partition a simply connected region and computes its outline.
    pub fn new(modules: BTreeMap<String, Rect>) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::Layout("no modules".into()));
        }
        let rs: Vec<(&String, &Rect)> = modules.iter().collect();
        for (l, r) in &rs {
            if r.w <= 0 || r.h <= 0 {
                return Err(Error::Layout(format!("module {l} has no area")));
            }
        }
        // sweep by x so the pairwise overlap check stays cheap on wide plans
        let mut order: Vec<usize> = (0..rs.len()).collect();
        order.sort_by_key(|&i| rs[i].1.x);
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if rs[j].1.x >= rs[i].1.right() {
                    break;
                }
                if rs[i].1.overlaps(rs[j].1) {
                    return Err(Error::Layout(format!("modules {} and {} overlap", rs[i].0, rs[j].0)));
                }
            }
        }
        let outline = trace_outline(modules.values())?;
        Ok(FloorPlan { modules, outline })
    }

    pub fn bounding_box(&self) -> Rect {
        let x0 = self.outline.iter().map(|p| p.0).min().unwrap();
        let y0 = self.outline.iter().map(|p| p.1).min().unwrap();
        let x1 = self.outline.iter().map(|p| p.0).max().unwrap();
        let y1 = self.outline.iter().map(|p| p.1).max().unwrap();
        Rect { x: x0, y: y0, w: x1 - x0, h: y1 - y0 }
    }

    /// Outline walls as (start, end) pairs in outline order.
    pub fn walls(&self) -> Vec<(Point, Point)> {
        let k = self.outline.len();
        (0..k).map(|i| (self.outline[i], self.outline[(i + 1) % k])).collect()
    }

    /// Adjacent module pairs (label order) with their orientation.
    pub fn adjacencies(&self) -> Result<BTreeMap<(String, String), Adjacency>> {
        let rs: Vec<(&String, &Rect)> = self.modules.iter().collect();
        let mut out = BTreeMap::new();
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                match contact(rs[i].1, rs[j].1) {
                    Some(Ok(a)) => {
                        out.insert((rs[i].0.clone(), rs[j].0.clone()), a);
                    }
                    Some(Err(())) => {
                        return Err(Error::PointContactAmbiguity(rs[i].0.clone(), rs[j].0.clone()));
                    }
                    None => {}
                }
            }
        }
        Ok(out)
    }
}

/// Boundary of a union of grid rectangles, from unit edges that are not cancelled by a
/// neighbor. Fails on holes or pinch points.
fn trace_outline<'a>(rects: impl Iterator<Item = &'a Rect>) -> Result<Vec<Point>> {
    let mut set: HashSet<(Point, Point)> = HashSet::new();
    let mut add = |a: Point, b: Point| {
        if !set.remove(&(b, a)) {
            set.insert((a, b));
        }
    };
    for r in rects {
        // counterclockwise unit edges
        for x in r.x..r.right() {
            add((x, r.y), (x + 1, r.y));
            add((x + 1, r.top()), (x, r.top()));
        }
        for y in r.y..r.top() {
            add((r.right(), y), (r.right(), y + 1));
            add((r.x, y + 1), (r.x, y));
        }
    }
    let mut edges: HashMap<Point, Point> = HashMap::new();
    for (a, b) in set {
        if edges.insert(a, b).is_some() {
            return Err(Error::Layout("outline pinches at a point".into()));
        }
    }
    let start = *edges.keys().min_by_key(|p| (p.1, p.0)).unwrap();
    let mut ring = vec![start];
    let mut cur = edges[&start];
    while cur != start {
        ring.push(cur);
        cur = *edges
            .get(&cur)
            .ok_or_else(|| Error::Layout("outline is not closed".into()))?;
        if ring.len() > edges.len() {
            return Err(Error::Layout("outline is not a simple cycle".into()));
        }
    }
    if ring.len() != edges.len() {
        return Err(Error::Layout("region has a hole or is disconnected".into()));
    }
    let k = ring.len();
    let corners: Vec<Point> = (0..k)
        .filter(|&i| {
            let (p, q, r) = (ring[(i + k - 1) % k], ring[i], ring[(i + 1) % k]);
            (q.0 - p.0, q.1 - p.1) != (r.0 - q.0, r.1 - q.1)
        })
        .map(|i| ring[i])
        .collect();
    Ok(corners)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CornerProfile {
    pub concave: Vec<Point>,
    pub convex: Vec<Point>,
}

pub fn corner_profile(fp: &FloorPlan) -> CornerProfile {
    let o = &fp.outline;
    let k = o.len();
    let mut cp = CornerProfile::default();
    for i in 0..k {
        let (p, q, r) = (o[(i + k - 1) % k], o[i], o[(i + 1) % k]);
        let cross = (q.0 - p.0) * (r.1 - q.1) - (q.1 - p.1) * (r.0 - q.0);
        if cross > 0 {
            cp.convex.push(q);
        } else {
            cp.concave.push(q);
        }
    }
    cp
}

/// Unit-compacted rectangular dual of the REL's graph, poles excluded.
pub fn rfp_from_rel(r: &Rel) -> Result<FloorPlan> {
    let g = r.graph();
    let p = r.poles();
    let n = g.vertex_count();
    let (lo, hi) = (|v: VertexId| 2 * v, |v: VertexId| 2 * v + 1);
    // vertical lines: left/right sides; horizontal lines: bottom/top sides
    let mut xs: UnionFind<usize> = UnionFind::new(2 * n);
    let mut ys: UnionFind<usize> = UnionFind::new(2 * n);
    for v in [p.s, p.n] {
        xs.union(lo(v), hi(p.w));
        xs.union(hi(v), lo(p.e));
    }
    for v in [p.w, p.e] {
        ys.union(lo(v), hi(p.s));
        ys.union(hi(v), lo(p.n));
    }
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    for (&(u, v), o) in r.edges() {
        let (tail, head) = if o.tail == u { (u, v) } else { (v, u) };
        match o.label {
            crate::rel::Label::T1 => {
                ys.union(hi(tail), lo(head));
                t1.push((tail, head));
            }
            crate::rel::Label::T2 => {
                xs.union(hi(tail), lo(head));
                t2.push((tail, head));
            }
        }
    }
    let span: Vec<VertexId> = (0..n).filter(|&v| v != p.w && v != p.e).collect();
    let x = longest_paths(&mut xs, &span, &t1, lo, hi)?;
    let tall: Vec<VertexId> = (0..n).filter(|&v| v != p.s && v != p.n).collect();
    let y = longest_paths(&mut ys, &tall, &t2, lo, hi)?;
    let (x0, y0) = (x[&xs.find(hi(p.w))], y[&ys.find(hi(p.s))]);
    let mut modules = BTreeMap::new();
    for v in (0..n).filter(|&v| !p.contains(v)) {
        let (l, rt) = (x[&xs.find(lo(v))], x[&xs.find(hi(v))]);
        let (b, t) = (y[&ys.find(lo(v))], y[&ys.find(hi(v))]);
        modules.insert(
            g.label(v).to_string(),
            Rect { x: l - x0, y: b - y0, w: rt - l, h: t - b },
        );
    }
    let fp = FloorPlan::new(modules)?;
    if fp.outline.len() != 4 {
        return Err(Error::Layout("extracted plan is not rectangular".into()));
    }
    Ok(fp)
}

/// Longest-path coordinates of line classes. Each module spans lo < hi, and every pair
/// adjacent across the other axis overlaps with positive length.
fn longest_paths(
    uf: &mut UnionFind<usize>,
    spans: &[VertexId],
    across: &[(VertexId, VertexId)],
    lo: impl Fn(VertexId) -> usize,
    hi: impl Fn(VertexId) -> usize,
) -> Result<HashMap<usize, i64>> {
    let mut dag: DiGraph<usize, ()> = DiGraph::new();
    let mut node: HashMap<usize, NodeIndex> = HashMap::new();
    let mut id = |c: usize, dag: &mut DiGraph<usize, ()>| *node.entry(c).or_insert_with(|| dag.add_node(c));
    for &v in spans {
        let (a, b) = (id(uf.find(lo(v)), &mut dag), id(uf.find(hi(v)), &mut dag));
        dag.update_edge(a, b, ());
    }
    for &(u, v) in across {
        for (s, t) in [(u, v), (v, u)] {
            let (a, b) = (id(uf.find(lo(s)), &mut dag), id(uf.find(hi(t)), &mut dag));
            dag.update_edge(a, b, ());
        }
    }
    let order = toposort(&dag, None).map_err(|_| Error::Layout("line constraints are cyclic".into()))?;
    let mut dist = vec![0i64; dag.node_count()];
    for &u in &order {
        for w in dag.neighbors(u) {
            dist[w.index()] = dist[w.index()].max(dist[u.index()] + 1);
        }
    }
    Ok(dag.node_indices().map(|i| (dag[i], dist[i.index()])).collect())
}

/// Drops NE from the top-right corner of a rectangular plan.
pub fn remove_ne(fp: &FloorPlan, ne: &str) -> Result<FloorPlan> {
    let bb = fp.bounding_box();
    let r = fp.modules.get(ne).ok_or(Error::NotCornerModule)?;
    if r.right() != bb.right() || r.top() != bb.top() || fp.modules.len() < 2 {
        return Err(Error::NotCornerModule);
    }
    let mut modules = fp.modules.clone();
    modules.remove(ne);
    FloorPlan::new(modules)
}

/// The two walls meeting at the single concave corner, as (W1, W2): W1 is the vertical one.
pub fn notch_walls(fp: &FloorPlan) -> Option<((Point, Point), (Point, Point))> {
    let cp = corner_profile(fp);
    let [c] = cp.concave[..] else { return None };
    let walls = fp.walls();
    let at: Vec<_> = walls.iter().filter(|w| w.0 == c || w.1 == c).copied().collect();
    let vertical = at.iter().find(|w| w.0 .0 == w.1 .0)?;
    let horizontal = at.iter().find(|w| w.0 .1 == w.1 .1)?;
    Some((*vertical, *horizontal))
}

/// Modules sharing a positive-length segment with an axis-parallel wall.
pub fn modules_on_wall(fp: &FloorPlan, w: (Point, Point)) -> Vec<String> {
    fp.modules
        .iter()
        .filter(|(_, r)| on_wall(r, w))
        .map(|(l, _)| l.clone())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonTrivialityVerdict {
    pub nontrivial: bool,
    pub witness: Option<(String, String, String)>,
}

/// Searches the modules on the notch walls for A, B, C with A-B and B-C adjacent in
/// different orientations.
pub fn verify_nontrivial_l(fp: &FloorPlan) -> Result<NonTrivialityVerdict> {
    let Some((w1, w2)) = notch_walls(fp) else {
        return Err(Error::Layout("plan is not L-shaped".into()));
    };
    let mut on: Vec<String> = modules_on_wall(fp, w1);
    for m in modules_on_wall(fp, w2) {
        if !on.contains(&m) {
            on.push(m);
        }
    }
    let adj = fp.adjacencies()?;
    let get = |a: &String, b: &String| {
        let k = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        adj.get(&k).copied()
    };
    for b in &on {
        for a in &on {
            for c in &on {
                if a == b || b == c || a == c {
                    continue;
                }
                if let (Some(x), Some(y)) = (get(a, b), get(b, c)) {
                    if x != y {
                        return Ok(NonTrivialityVerdict {
                            nontrivial: true,
                            witness: Some((a.clone(), b.clone(), c.clone())),
                        });
                    }
                }
            }
        }
    }
    Ok(NonTrivialityVerdict { nontrivial: false, witness: None })
}

/// No module touches both notch walls.
pub fn notch_walls_disjoint(fp: &FloorPlan) -> bool {
    match notch_walls(fp) {
        Some((w1, w2)) => {
            let a: BTreeSet<String> = modules_on_wall(fp, w1).into_iter().collect();
            modules_on_wall(fp, w2).iter().all(|m| !a.contains(m))
        }
        None => false,
    }
}

/// Adjacency dual of the plan, embedded by geometry. Needs at least three modules.
pub fn dual_graph(fp: &FloorPlan) -> Result<EmbeddedGraph> {
    let adj = fp.adjacencies()?;
    let labels: Vec<String> = fp.modules.keys().cloned().collect();
    let idx: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let rects: Vec<Rect> = fp.modules.values().copied().collect();
    let mut nbrs: Vec<Vec<(f64, usize)>> = vec![Vec::new(); labels.len()];
    for (a, b) in adj.keys() {
        let (i, j) = (idx[a.as_str()], idx[b.as_str()]);
        let (ra, rb) = (rects[i], rects[j]);
        // midpoint of the shared wall, doubled to stay on the integer grid
        let mx = ra.x.max(rb.x) + ra.right().min(rb.right());
        let my = ra.y.max(rb.y) + ra.top().min(rb.top());
        for (u, v, r) in [(i, j, ra), (j, i, rb)] {
            let ang = ((my - (2 * r.y + r.h)) as f64).atan2((mx - (2 * r.x + r.w)) as f64);
            nbrs[u].push((ang, v));
        }
    }
    // clockwise with y pointing up: decreasing angle
    let rotation: Vec<Vec<usize>> = nbrs
        .into_iter()
        .map(|mut l| {
            l.sort_by(|a, b| b.0.total_cmp(&a.0));
            l.into_iter().map(|(_, v)| v).collect()
        })
        .collect();
    let outer = boundary_modules(fp, &rects);
    EmbeddedGraph::new(labels, rotation, outer)
}

/// Modules along the outline in clockwise order.
fn boundary_modules(fp: &FloorPlan, rects: &[Rect]) -> Vec<usize> {
    let mut seq: Vec<usize> = Vec::new();
    for (a, b) in fp.walls() {
        let mut on: Vec<(i64, usize)> = Vec::new();
        for (i, r) in rects.iter().enumerate() {
            let w = (a, b);
            if on_wall(r, w) {
                // position along the counterclockwise walk
                let key = if a.0 == b.0 {
                    if b.1 > a.1 { r.y } else { -r.y }
                } else if b.0 > a.0 {
                    r.x
                } else {
                    -r.x
                };
                on.push((key, i));
            }
        }
        on.sort_unstable();
        for (_, i) in on {
            if seq.last() != Some(&i) {
                seq.push(i);
            }
        }
    }
    while seq.len() > 1 && seq.first() == seq.last() {
        seq.pop();
    }
    seq.reverse();
    seq
}

fn on_wall(r: &Rect, (a, b): (Point, Point)) -> bool {
    if a.0 == b.0 {
        let (y0, y1) = (a.1.min(b.1), a.1.max(b.1));
        (r.x == a.0 || r.right() == a.0) && r.top().min(y1) - r.y.max(y0) > 0
    } else {
        let (x0, x1) = (a.0.min(b.0), a.0.max(b.0));
        (r.y == a.1 || r.top() == a.1) && r.right().min(x1) - r.x.max(x0) > 0
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::boundary::find_triplets;
    use crate::flipping::normalize_labels;
    use crate::oracle::{generate_ptpg, GenSpec};
    use crate::paths::{augment_with_ne, build_completed, four_complete_plain, select_paths};
    use crate::rel::construct_rel;

    fn rect(x: i64, y: i64, w: i64, h: i64) -> Rect {
        Rect { x, y, w, h }
    }

    fn plan(ms: &[(&str, Rect)]) -> FloorPlan {
        FloorPlan::new(ms.iter().map(|(l, r)| (l.to_string(), *r)).collect()).unwrap()
    }

    #[test]
    fn corner_counts() {
        let sq = plan(&[("a", rect(0, 0, 2, 2))]);
        assert_eq!(corner_profile(&sq).concave.len(), 0);
        assert_eq!(corner_profile(&sq).convex.len(), 4);
        let l = plan(&[("a", rect(0, 0, 2, 1)), ("b", rect(0, 1, 1, 1))]);
        let cp = corner_profile(&l);
        assert_eq!((cp.concave.len(), cp.convex.len()), (1, 5));
        assert_eq!(cp.concave, vec![(1, 1)]);
        let t = plan(&[("a", rect(0, 0, 3, 1)), ("b", rect(1, 1, 1, 1))]);
        assert_eq!(corner_profile(&t).concave.len(), 2);
    }

    #[test]
    fn point_contact_is_reported() {
        let fp = plan(&[("a", rect(0, 0, 1, 1)), ("b", rect(1, 0, 1, 2)), ("c", rect(0, 1, 1, 1))]);
        assert!(fp.adjacencies().is_ok());
        let bad = FloorPlan {
            modules: [("a".to_string(), rect(0, 0, 1, 1)), ("b".to_string(), rect(1, 1, 1, 1))].into(),
            outline: vec![],
        };
        assert!(matches!(bad.adjacencies(), Err(Error::PointContactAmbiguity(..))));
    }

    #[test]
    fn overlap_and_hole_rejected() {
        let ms = |v: &[(&str, Rect)]| FloorPlan::new(v.iter().map(|(l, r)| (l.to_string(), *r)).collect());
        assert!(ms(&[("a", rect(0, 0, 2, 2)), ("b", rect(1, 1, 2, 2))]).is_err());
        let ring = [
            ("a", rect(0, 0, 3, 1)),
            ("b", rect(0, 2, 3, 1)),
            ("c", rect(0, 1, 1, 1)),
            ("d", rect(2, 1, 1, 1)),
        ];
        assert!(ms(&ring).is_err());
    }

    #[test]
    fn trivial_and_nontrivial_l() {
        // two modules on the notch walls: trivial
        let two = plan(&[("a", rect(0, 0, 2, 1)), ("b", rect(0, 1, 1, 1))]);
        assert!(!verify_nontrivial_l(&two).unwrap().nontrivial);
        // b and c stacked on the vertical notch wall, c beside d on the horizontal one
        let three = plan(&[
            ("a", rect(0, 0, 1, 3)),
            ("b", rect(1, 2, 1, 1)),
            ("c", rect(1, 0, 1, 2)),
            ("d", rect(2, 0, 1, 1)),
        ]);
        let v = verify_nontrivial_l(&three).unwrap();
        assert!(v.nontrivial);
        assert!(notch_walls_disjoint(&three));
    }

    #[test]
    fn single_interior_vertex_is_unit_square() {
        let pts = [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)];
        let edges = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)];
        let g = crate::graph::from_drawing(&["v", "N", "E", "S", "W"], &pts, &edges).unwrap();
        let poles = crate::paths::Poles { n: 1, e: 2, s: 3, w: 4 };
        let r = construct_rel(Arc::new(g), poles).unwrap();
        let fp = rfp_from_rel(&r).unwrap();
        assert_eq!(fp.modules["v"], rect(0, 0, 1, 1));
        assert!(fp.adjacencies().unwrap().is_empty());
    }

    fn check_rfp(g: &EmbeddedGraph) {
        let fc = four_complete_plain(g).unwrap();
        let r = construct_rel(Arc::new(fc.graph), fc.poles).unwrap();
        let fp = rfp_from_rel(&r).unwrap();
        assert_eq!(corner_profile(&fp).concave.len(), 0);
        let d = dual_graph(&fp).unwrap();
        assert!(crate::graph::same_labeled_embedding(&d, g));
    }

    #[test]
    fn rfp_dual_matches_input() {
        for seed in 0..80 {
            let n = 4 + (seed as usize * 3) % 50;
            let g = generate_ptpg(GenSpec { n, seed, cip_target: None }).unwrap();
            if crate::boundary::find_cips(&g).len() <= 4 {
                check_rfp(&g);
            }
        }
    }

    #[test]
    fn l_plans_from_generated_graphs() {
        let mut made = 0;
        for seed in 0..120 {
            let n = 6 + (seed as usize * 7) % 40;
            let g = generate_ptpg(GenSpec { n, seed, cip_target: None }).unwrap();
            for t in find_triplets(&g) {
                let Ok(ps) = select_paths(&g, t) else { continue };
                let ag = build_completed(&g, &ps).unwrap();
                let r = construct_rel(Arc::new(ag.graph.clone()), ag.poles.unwrap()).unwrap();
                let r = normalize_labels(&r, &t, ag.ne).unwrap();
                let rfp = rfp_from_rel(&r).unwrap();
                let gp = augment_with_ne(&g, &ps).unwrap().graph;
                assert!(crate::graph::same_labeled_embedding(&dual_graph(&rfp).unwrap(), &gp));
                let l = remove_ne(&rfp, ag.graph.label(ag.ne)).unwrap();
                assert_eq!(corner_profile(&l).concave.len(), 1, "seed {seed}");
                assert!(verify_nontrivial_l(&l).unwrap().nontrivial, "seed {seed} {t:?}");
                assert!(notch_walls_disjoint(&l));
                assert!(crate::graph::same_labeled_embedding(&dual_graph(&l).unwrap(), &g), "seed {seed}");
                made += 1;
                break;
            }
        }
        assert!(made > 50, "{made}");
    }
}
