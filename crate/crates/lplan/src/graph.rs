//! Embedded planar graphs given as a clockwise rotation system plus an outer face.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Undirected edge key with the smaller id first.
pub fn ekey(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGraph {
    labels: Vec<String>,
    rotation: Vec<Vec<VertexId>>,
    outer: Vec<VertexId>,
    faces: Vec<Vec<VertexId>>,
    outer_face: usize,
    dart_face: HashMap<(VertexId, VertexId), usize>,
}

impl EmbeddedGraph {
    /// Builds a graph after checking the structural contract: simple, symmetric rotations,
    /// connected, genus zero, and an outer cycle that is traced by the rotation system.
    pub fn new(
        labels: Vec<String>,
        rotation: Vec<Vec<VertexId>>,
        outer: Vec<VertexId>,
    ) -> Result<Self> {
        let n = labels.len();
        let bad = |m: String| Err(Error::InconsistentEmbedding(m));
        if n < 3 {
            return bad(format!("need at least 3 vertices, got {n}"));
        }
        if rotation.len() != n {
            return bad(format!("{} rotation lists for {n} vertices", rotation.len()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return bad(format!("duplicate label {l:?}"));
            }
        }
        let mut adj: HashSet<(VertexId, VertexId)> = HashSet::new();
        for (u, rot) in rotation.iter().enumerate() {
            let mut local = HashSet::new();
            for &v in rot {
                if v >= n {
                    return bad(format!("vertex {u} lists unknown neighbor {v}"));
                }
                if v == u {
                    return bad(format!("loop at vertex {u}"));
                }
                if !local.insert(v) {
                    return bad(format!("multi-edge {u}-{v}"));
                }
                adj.insert((u, v));
            }
        }
        for &(u, v) in &adj {
            if !adj.contains(&(v, u)) {
                return bad(format!("edge {u}-{v} missing from rotation of {v}"));
            }
        }
        if outer.len() < 3 {
            return bad("outer face needs at least 3 vertices".into());
        }
        let mut on_outer = HashSet::new();
        for (i, &u) in outer.iter().enumerate() {
            if u >= n || !on_outer.insert(u) {
                return bad(format!("outer face vertex {u} unknown or repeated"));
            }
            let v = outer[(i + 1) % outer.len()];
            if !adj.contains(&(u, v)) {
                return bad(format!("outer face pair {u}-{v} is not an edge"));
            }
        }
        // connectivity
        let mut stack = vec![0];
        let mut reached = vec![false; n];
        reached[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &rotation[u] {
                if !reached[v] {
                    reached[v] = true;
                    stack.push(v);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return bad("graph is disconnected".into());
        }

        let (faces, dart_face) = walk_faces(&rotation, adj.len())?;
        let e = adj.len() / 2;
        if n + faces.len() != e + 2 {
            return bad(format!(
                "rotation system is not planar (V={n}, E={e}, F={})",
                faces.len()
            ));
        }
        let outer_face = dart_face[&(outer[0], outer[1])];
        if !same_cycle(&faces[outer_face], &outer) {
            return bad("outer face does not match a face of the rotation system".into());
        }
        Ok(Self {
            labels,
            rotation,
            outer,
            faces,
            outer_face,
            dart_face,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn find(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Clockwise neighbor list of `v`.
    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<VertexId>] {
        &self.rotation
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    /// Clockwise outer boundary.
    pub fn outer(&self) -> &[VertexId] {
        &self.outer
    }

    pub fn is_outer(&self, v: VertexId) -> bool {
        self.outer.contains(&v)
    }

    pub fn outer_position(&self, v: VertexId) -> Option<usize> {
        self.outer.iter().position(|&u| u == v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.rotation[u].contains(&v)
    }

    /// All edges as (small, large), sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = (0..self.vertex_count())
            .flat_map(|u| {
                self.rotation[u]
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn faces(&self) -> &[Vec<VertexId>] {
        &self.faces
    }

    pub fn outer_face_index(&self) -> usize {
        self.outer_face
    }

    /// Face to the left of the dart u→v in the face walk.
    pub fn face_of_dart(&self, u: VertexId, v: VertexId) -> Option<usize> {
        self.dart_face.get(&(u, v)).copied()
    }

    /// Neighbor following `u` clockwise around `v`.
    pub fn cw_next(&self, v: VertexId, u: VertexId) -> VertexId {
        let r = &self.rotation[v];
        let i = r.iter().position(|&w| w == u).expect("not a neighbor");
        r[(i + 1) % r.len()]
    }

    /// Neighbor preceding `u` clockwise around `v`.
    pub fn ccw_next(&self, v: VertexId, u: VertexId) -> VertexId {
        let r = &self.rotation[v];
        let i = r.iter().position(|&w| w == u).expect("not a neighbor");
        r[(i + r.len() - 1) % r.len()]
    }

    /// Same graph with the outer cycle listed from `v`.
    pub fn with_outer_start(&self, v: VertexId) -> Result<Self> {
        let s = self
            .outer_position(v)
            .ok_or_else(|| Error::EmbeddingConflict("vertex is not on the outer face".into()))?;
        let mut g = self.clone();
        g.outer.rotate_left(s);
        Ok(g)
    }

    /// Adds a vertex in the outer face adjacent to the clockwise outer run `run`.
    /// The interior vertices of the run stop being outer vertices.
    pub fn insert_outer_vertex(&self, label: &str, run: &[VertexId]) -> Result<(Self, VertexId)> {
        let m = self.outer.len();
        let conflict = |s: &str| Err(Error::EmbeddingConflict(s.to_string()));
        if run.len() < 2 || run.len() >= m {
            return conflict("outer run must have between 2 and |outer|-1 vertices");
        }
        let start = match self.outer_position(run[0]) {
            Some(p) => p,
            None => return conflict("run does not start on the outer face"),
        };
        for (i, &u) in run.iter().enumerate() {
            if self.outer[(start + i) % m] != u {
                return conflict("run is not a clockwise stretch of the outer face");
            }
        }
        if self.labels.iter().any(|l| l == label) {
            return conflict("label already in use");
        }
        let v = self.vertex_count();
        let mut rotation = self.rotation.clone();
        for &u in run {
            let pred = self.outer[(self.outer_position(u).unwrap() + m - 1) % m];
            let r = &mut rotation[u];
            let i = r.iter().position(|&w| w == pred).unwrap();
            r.insert(i + 1, v);
        }
        rotation.push(run.iter().rev().copied().collect());
        let mut outer = vec![run[0], v];
        let last = start + run.len() - 1;
        for i in 0..=(m - run.len()) {
            outer.push(self.outer[(last + i) % m]);
        }
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        let g = Self::new(labels, rotation, outer)
            .map_err(|e| Error::EmbeddingConflict(e.to_string()))?;
        Ok((g, v))
    }

    /// Region bounded by a simple cycle, on the side away from the outer face.
    pub fn region_inside(&self, cycle: &[VertexId]) -> Result<Region> {
        let k = cycle.len();
        let mut barrier = HashSet::new();
        for i in 0..k {
            let (u, v) = (cycle[i], cycle[(i + 1) % k]);
            if !self.has_edge(u, v) {
                return Err(Error::InconsistentEmbedding(format!(
                    "cycle pair {u}-{v} is not an edge"
                )));
            }
            barrier.insert(ekey(u, v));
        }
        let mut outside = vec![false; self.faces.len()];
        outside[self.outer_face] = true;
        let mut stack = vec![self.outer_face];
        while let Some(f) = stack.pop() {
            let face = &self.faces[f];
            for i in 0..face.len() {
                let (u, v) = (face[i], face[(i + 1) % face.len()]);
                if barrier.contains(&ekey(u, v)) {
                    continue;
                }
                let g = self.dart_face[&(v, u)];
                if !outside[g] {
                    outside[g] = true;
                    stack.push(g);
                }
            }
        }
        let faces: Vec<usize> = (0..self.faces.len()).filter(|&f| !outside[f]).collect();
        let on_cycle: HashSet<_> = cycle.iter().copied().collect();
        let mut vertices = HashSet::new();
        let mut edges = HashSet::new();
        for &f in &faces {
            let face = &self.faces[f];
            for i in 0..face.len() {
                let (u, v) = (face[i], face[(i + 1) % face.len()]);
                if !on_cycle.contains(&u) {
                    vertices.insert(u);
                }
                if !outside[self.dart_face[&(v, u)]] {
                    edges.insert(ekey(u, v));
                }
            }
        }
        let mut vertices: Vec<_> = vertices.into_iter().collect();
        vertices.sort_unstable();
        let mut edges: Vec<_> = edges.into_iter().collect();
        edges.sort_unstable();
        Ok(Region {
            faces,
            vertices,
            edges,
        })
    }
}

/// Faces, vertices and edges strictly inside a cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    pub faces: Vec<usize>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

fn same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    match a.iter().position(|&x| x == b[0]) {
        Some(s) => (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i]),
        None => false,
    }
}

type FaceWalk = (Vec<Vec<VertexId>>, HashMap<(VertexId, VertexId), usize>);

fn walk_faces(rotation: &[Vec<VertexId>], darts: usize) -> Result<FaceWalk> {
    let mut pos: HashMap<(VertexId, VertexId), usize> = HashMap::with_capacity(darts);
    for (v, rot) in rotation.iter().enumerate() {
        for (i, &u) in rot.iter().enumerate() {
            pos.insert((v, u), i);
        }
    }
    let mut dart_face = HashMap::with_capacity(darts);
    let mut faces = Vec::new();
    for (u0, rot) in rotation.iter().enumerate() {
        for &v0 in rot {
            if dart_face.contains_key(&(u0, v0)) {
                continue;
            }
            let id = faces.len();
            let mut face = Vec::new();
            let (mut u, mut v) = (u0, v0);
            loop {
                if face.len() > darts {
                    return Err(Error::InconsistentEmbedding(
                        "face walk did not terminate".into(),
                    ));
                }
                dart_face.insert((u, v), id);
                face.push(u);
                let r = &rotation[v];
                let w = r[(pos[&(v, u)] + 1) % r.len()];
                u = v;
                v = w;
                if (u, v) == (u0, v0) {
                    break;
                }
            }
            faces.push(face);
        }
    }
    Ok((faces, dart_face))
}

/// All faces of the embedding; interior faces run counterclockwise, the outer face clockwise.
pub fn trace_faces(g: &EmbeddedGraph) -> Result<Vec<Vec<VertexId>>> {
    Ok(g.faces.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PtpgReport {
    pub is_biconnected: bool,
    pub nontriangular_interior_faces: Vec<Vec<VertexId>>,
    pub separating_triangles: Vec<[VertexId; 3]>,
    pub verdict: Verdict,
}

impl PtpgReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub fn validate_ptpg(g: &EmbeddedGraph) -> PtpgReport {
    let is_biconnected = cut_vertices(g).is_empty();
    let nontriangular_interior_faces: Vec<_> = g
        .faces
        .iter()
        .enumerate()
        .filter(|&(i, f)| i != g.outer_face && f.len() != 3)
        .map(|(_, f)| f.clone())
        .collect();
    let separating_triangles = find_separating_triangles(g);
    let ok = is_biconnected
        && nontriangular_interior_faces.is_empty()
        && separating_triangles.is_empty();
    PtpgReport {
        is_biconnected,
        nontriangular_interior_faces,
        separating_triangles,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    }
}

/// 3-cycles that are not faces and enclose at least one vertex, as sorted triples.
pub fn find_separating_triangles(g: &EmbeddedGraph) -> Vec<[VertexId; 3]> {
    let mut face_tris = HashSet::new();
    for f in &g.faces {
        if f.len() == 3 {
            let mut t = [f[0], f[1], f[2]];
            t.sort_unstable();
            face_tris.insert(t);
        }
    }
    let all_triangular = g
        .faces
        .iter()
        .enumerate()
        .all(|(i, f)| i == g.outer_face || f.len() == 3);
    let n = g.vertex_count();
    let mut mark = vec![false; n];
    let mut out = Vec::new();
    for u in 0..n {
        for &v in &g.rotation[u] {
            if v <= u {
                continue;
            }
            for &w in &g.rotation[u] {
                mark[w] = true;
            }
            for &w in &g.rotation[v] {
                if w > v && mark[w] && !face_tris.contains(&[u, v, w]) {
                    let encloses = all_triangular
                        || g.region_inside(&[u, v, w])
                            .map(|r| !r.vertices.is_empty())
                            .unwrap_or(false);
                    if encloses {
                        out.push([u, v, w]);
                    }
                }
            }
            for &w in &g.rotation[u] {
                mark[w] = false;
            }
        }
    }
    out.sort_unstable();
    out
}

/// Common neighbors of u and v in ascending id order.
pub fn common_neighbors(g: &EmbeddedGraph, u: VertexId, v: VertexId) -> Vec<VertexId> {
    let nu: HashSet<_> = g.rotation[u].iter().copied().collect();
    let mut out: Vec<_> = g.rotation[v]
        .iter()
        .copied()
        .filter(|w| nu.contains(w))
        .collect();
    out.sort_unstable();
    out
}

/// Articulation points via iterative low-link DFS.
pub fn cut_vertices(g: &EmbeddedGraph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.rotation[u].len() {
                let v = g.rotation[u][*idx];
                *idx += 1;
                if disc[v] == usize::MAX {
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((v, u, 0));
                } else if v != parent {
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if parent != root && low[u] >= disc[parent] {
                        is_cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    (0..n).filter(|&v| is_cut[v]).collect()
}

/// Builds an embedding from a straight-line drawing. Rotations are read off the
/// angles; the outer face is the one traced clockwise.
pub fn from_drawing(
    labels: &[&str],
    points: &[(f64, f64)],
    edges: &[(VertexId, VertexId)],
) -> Result<EmbeddedGraph> {
    let n = labels.len();
    let mut rotation = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u >= n || v >= n {
            return Err(Error::InconsistentEmbedding(format!("edge {u}-{v} out of range")));
        }
        rotation[u].push(v);
        rotation[v].push(u);
    }
    for (v, rot) in rotation.iter_mut().enumerate() {
        let (x0, y0) = points[v];
        let angle = |w: &VertexId| {
            let (x, y) = points[*w];
            (y - y0).atan2(x - x0)
        };
        rot.sort_by(|a, b| angle(b).total_cmp(&angle(a)));
    }
    let darts = 2 * edges.len();
    let (faces, _) = walk_faces(&rotation, darts)?;
    let area = |f: &Vec<VertexId>| {
        (0..f.len())
            .map(|i| {
                let (x1, y1) = points[f[i]];
                let (x2, y2) = points[f[(i + 1) % f.len()]];
                x1 * y2 - x2 * y1
            })
            .sum::<f64>()
    };
    let outer = faces
        .iter()
        .min_by(|a, b| area(a).total_cmp(&area(b)))
        .cloned()
        .unwrap_or_default();
    let s = outer.iter().enumerate().min_by_key(|&(_, v)| v).map_or(0, |(i, _)| i);
    let outer: Vec<_> = (0..outer.len()).map(|i| outer[(s + i) % outer.len()]).collect();
    EmbeddedGraph::new(labels.iter().map(|s| s.to_string()).collect(), rotation, outer)
}

/// Label-preserving equality of two embedded graphs: same labels, and each vertex has the
/// same clockwise neighbor cycle.
pub fn same_labeled_embedding(a: &EmbeddedGraph, b: &EmbeddedGraph) -> bool {
    let canon = |g: &EmbeddedGraph| -> BTreeMap<String, Vec<String>> {
        (0..g.vertex_count())
            .map(|v| {
                let mut r: Vec<String> = g.rotation(v).iter().map(|&u| g.label(u).to_string()).collect();
                if let Some(k) = (0..r.len()).min_by(|&i, &j| r[i].cmp(&r[j])) {
                    r.rotate_left(k);
                }
                (g.label(v).to_string(), r)
            })
            .collect()
    };
    canon(a) == canon(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> EmbeddedGraph {
        from_drawing(&["a", "b", "c"], &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], &[(0, 1), (1, 2), (0, 2)])
            .unwrap()
    }

    /// Triangle with a center vertex of degree 3: the outer triangle is separating
    /// only when it is not the outer face, so put a second layer around it.
    fn nested() -> EmbeddedGraph {
        // outer square 0..3, triangle 4,5,6 inside, center 7
        let pts = [
            (-10.0, -10.0),
            (10.0, -10.0),
            (10.0, 10.0),
            (-10.0, 10.0),
            (-3.0, -2.0),
            (3.0, -2.0),
            (0.0, 4.0),
            (0.0, 0.0),
        ];
        let edges = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 4),
            (7, 4),
            (7, 5),
            (7, 6),
            (0, 4),
            (1, 4),
            (1, 5),
            (2, 5),
            (2, 6),
            (3, 6),
            (3, 4),
        ];
        from_drawing(&["0", "1", "2", "3", "4", "5", "6", "7"], &pts, &edges).unwrap()
    }

    #[test]
    fn k3_has_two_triangular_faces() {
        let g = k3();
        let faces = trace_faces(&g).unwrap();
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.len() == 3));
        assert!(validate_ptpg(&g).passed());
    }

    #[test]
    fn face_lengths_sum_to_twice_edges() {
        let g = nested();
        let total: usize = g.faces().iter().map(Vec::len).sum();
        assert_eq!(total, 2 * g.edge_count());
        assert_eq!(g.vertex_count() + g.faces().len(), g.edge_count() + 2);
    }

    #[test]
    fn nested_triangle_is_separating() {
        let g = nested();
        assert_eq!(find_separating_triangles(&g), vec![[4, 5, 6]]);
        let r = validate_ptpg(&g);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.is_biconnected);
    }

    #[test]
    fn region_inside_triangle() {
        let g = nested();
        let r = g.region_inside(&[4, 5, 6]).unwrap();
        assert_eq!(r.vertices, vec![7]);
        assert_eq!(r.faces.len(), 3);
        assert_eq!(r.edges, vec![(4, 7), (5, 7), (6, 7)]);
    }

    #[test]
    fn rejects_asymmetric_rotation() {
        let e = EmbeddedGraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![1, 2], vec![2], vec![0, 1]],
            vec![0, 1, 2],
        );
        assert!(matches!(e, Err(Error::InconsistentEmbedding(_))));
    }

    #[test]
    fn rejects_wrong_outer_orientation() {
        let g = nested();
        let mut o = g.outer().to_vec();
        o.reverse();
        let e = EmbeddedGraph::new(g.labels().to_vec(), g.rotations().to_vec(), o);
        assert!(e.is_err());
    }

    #[test]
    fn pendant_vertex_is_reported() {
        let pts = [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0), (2.0, 2.0)];
        let g = from_drawing(&["a", "b", "c", "d"], &pts, &[(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        assert_eq!(cut_vertices(&g), vec![0]);
        let r = validate_ptpg(&g);
        assert!(!r.is_biconnected);
        assert_eq!(r.nontriangular_interior_faces.len(), 1);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn outer_insertion_keeps_ptpg() {
        let g = k3();
        let outer = g.outer().to_vec();
        let (h, v) = g.insert_outer_vertex("d", &outer[0..2]).unwrap();
        assert_eq!(h.vertex_count(), 4);
        assert_eq!(h.outer().len(), 4);
        assert!(h.is_outer(v));
        assert!(validate_ptpg(&h).passed());
        let (h2, w) = h.insert_outer_vertex("e", &[h.outer()[1], h.outer()[2], h.outer()[3]]).unwrap();
        assert!(validate_ptpg(&h2).passed());
        assert!(!h2.is_outer(h.outer()[2]));
        assert_eq!(h2.degree(w), 3);
    }

    #[test]
    fn common_neighbors_symmetric() {
        let g = nested();
        for (u, v) in g.edges() {
            assert_eq!(common_neighbors(&g, u, v), common_neighbors(&g, v, u));
        }
        assert_eq!(common_neighbors(&g, 4, 5), vec![1, 6, 7]);
    }
}
