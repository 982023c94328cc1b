//! Corner implying paths, shortcuts and triplets on the outer boundary.

use serde::Serialize;

use crate::graph::{common_neighbors, EmbeddedGraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Shortcut {
    pub u: VertexId,
    pub v: VertexId,
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cip {
    /// Clockwise u1..un; the chord is (u1, un).
    pub vertices: Vec<VertexId>,
}

impl Cip {
    pub fn chord(&self) -> (VertexId, VertexId) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    /// Vertices strictly between the chord ends.
    pub fn inner(&self) -> &[VertexId] {
        &self.vertices[1..self.vertices.len() - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Triplet {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
}

/// Outer boundary starting from its lowest-id vertex, clockwise.
pub fn canonical_outer(g: &EmbeddedGraph) -> Vec<VertexId> {
    let o = g.outer();
    let s = (0..o.len()).min_by_key(|&i| o[i]).unwrap();
    (0..o.len()).map(|i| o[(s + i) % o.len()]).collect()
}

/// Clockwise outer arc from `u` to `v`, both included.
pub fn outer_arc(g: &EmbeddedGraph, u: VertexId, v: VertexId) -> Vec<VertexId> {
    let o = g.outer();
    let m = o.len();
    let mut i = g.outer_position(u).expect("u not on outer face");
    let mut out = vec![u];
    while o[i] != v {
        i = (i + 1) % m;
        out.push(o[i]);
        assert!(out.len() <= m, "v not on outer face");
    }
    out
}

pub fn find_shortcuts(g: &EmbeddedGraph) -> Vec<Shortcut> {
    let co = canonical_outer(g);
    let m = co.len();
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            if g.has_edge(co[i], co[j]) {
                out.push(Shortcut {
                    u: co[i],
                    v: co[j],
                    interior: true,
                });
            }
        }
    }
    out
}

pub fn find_cips(g: &EmbeddedGraph) -> Vec<Cip> {
    let shortcuts = find_shortcuts(g);
    let rank = outer_rank(g);
    let mut out: Vec<Cip> = Vec::new();
    for (k, s) in shortcuts.iter().enumerate() {
        for (x, y) in [(s.u, s.v), (s.v, s.u)] {
            let arc = outer_arc(g, x, y);
            let blocked = shortcuts
                .iter()
                .enumerate()
                .any(|(l, t)| l != k && arc.contains(&t.u) && arc.contains(&t.v));
            if !blocked {
                out.push(Cip { vertices: arc });
            }
        }
    }
    out.sort_by_key(|c| (rank[c.vertices[0]], c.vertices.len()));
    out
}

/// Position of each vertex in the canonical outer order; `usize::MAX` for interior vertices.
pub fn outer_rank(g: &EmbeddedGraph) -> Vec<usize> {
    let mut rank = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in canonical_outer(g).iter().enumerate() {
        rank[v] = i;
    }
    rank
}

pub fn is_triplet(g: &EmbeddedGraph, a: VertexId, b: VertexId, c: VertexId) -> bool {
    let o = g.outer();
    let m = o.len();
    if m < 4 {
        return false;
    }
    let Some(i) = g.outer_position(a) else {
        return false;
    };
    o[(i + 1) % m] == b
        && o[(i + 2) % m] == c
        && !g.has_edge(a, c)
        && common_neighbors(g, a, c) == [b]
}

pub fn find_triplets(g: &EmbeddedGraph) -> Vec<Triplet> {
    let co = canonical_outer(g);
    let m = co.len();
    (0..m)
        .map(|i| Triplet {
            a: co[i],
            b: co[(i + 1) % m],
            c: co[(i + 2) % m],
        })
        .filter(|t| is_triplet(g, t.a, t.b, t.c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Necessary {
    pub cip_count: usize,
    pub triplets: Vec<Triplet>,
    pub pass: bool,
    /// Human-readable reasons for a failing verdict.
    pub reasons: Vec<String>,
}

pub const MAX_CIPS: usize = 5;

pub fn necessary_conditions(g: &EmbeddedGraph) -> Necessary {
    let cip_count = find_cips(g).len();
    let triplets = find_triplets(g);
    let mut reasons = Vec::new();
    if cip_count > MAX_CIPS {
        reasons.push(format!(
            "too many corner implying paths: {cip_count} > {MAX_CIPS}"
        ));
    }
    if triplets.is_empty() {
        reasons.push("no admissible triplet on the outer boundary".to_string());
    }
    Necessary {
        cip_count,
        pass: reasons.is_empty(),
        triplets,
        reasons,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::from_drawing;

    /// Hexagon 1..6 with chord 6-3 and two apex vertices 7, 8.
    fn fig5a() -> EmbeddedGraph {
        let pts = [
            (-2.0, 4.0),
            (2.0, 4.0),
            (4.0, 0.0),
            (2.0, -4.0),
            (-2.0, -4.0),
            (-4.0, 0.0),
            (0.0, 2.0),
            (0.0, -2.0),
        ];
        // ids 0..7 = labels 1..8
        let e = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 0),
            (5, 2),
            (6, 5),
            (6, 0),
            (6, 1),
            (6, 2),
            (7, 2),
            (7, 3),
            (7, 4),
            (7, 5),
        ];
        from_drawing(&["1", "2", "3", "4", "5", "6", "7", "8"], &pts, &e).unwrap()
    }

    fn labels(g: &EmbeddedGraph, vs: &[VertexId]) -> Vec<String> {
        vs.iter().map(|&v| g.label(v).to_string()).collect()
    }

    #[test]
    fn shortcut_and_cips() {
        let g = fig5a();
        let s = find_shortcuts(&g);
        assert_eq!(s.len(), 1);
        assert_eq!(labels(&g, &[s[0].u, s[0].v]), ["3", "6"]);
        let cips: Vec<_> = find_cips(&g).iter().map(|c| labels(&g, &c.vertices)).collect();
        assert_eq!(cips, vec![vec!["3", "4", "5", "6"], vec!["6", "1", "2", "3"]]);
    }

    #[test]
    fn wheel_has_no_shortcut() {
        let mut pts = vec![(0.0, 0.0)];
        let mut e = Vec::new();
        for i in 0..5 {
            let t = -(i as f64) * std::f64::consts::TAU / 5.0;
            pts.push((t.cos() * 5.0, t.sin() * 5.0));
            e.push((0, i + 1));
            e.push((i + 1, (i + 1) % 5 + 1));
        }
        let g = from_drawing(&["h", "1", "2", "3", "4", "5"], &pts, &e).unwrap();
        assert!(find_shortcuts(&g).is_empty());
        assert!(find_cips(&g).is_empty());
        // every outer pair two apart shares the hub, so no triplet
        assert!(find_triplets(&g).is_empty());
        let nc = necessary_conditions(&g);
        assert!(!nc.pass);
    }

    #[test]
    fn fig5a_triplets() {
        let g = fig5a();
        let t: Vec<_> = find_triplets(&g)
            .iter()
            .map(|t| labels(&g, &[t.a, t.b, t.c]))
            .collect();
        // 2-3-4 would share 8 and 3; 1-2-3 share 7
        for x in &t {
            let a = g.find(&x[0]).unwrap();
            let c = g.find(&x[2]).unwrap();
            assert_eq!(common_neighbors(&g, a, c).len(), 1);
        }
        assert!(necessary_conditions(&g).cip_count == 2);
    }
}
