//! Graph and plan documents, and SVG rendering.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EmbeddedGraph;
use crate::layout::{corner_profile, FloorPlan, Rect};
use crate::pipeline::Planned;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: u64,
    pub label: String,
}

/// On-disk graph: `rotation[i]` is the clockwise neighbor list of `vertices[i]`, by id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<VertexEntry>,
    pub rotation: Vec<Vec<u64>>,
    pub outer: Vec<u64>,
}

impl GraphDocument {
    pub fn from_graph(g: &EmbeddedGraph) -> Self {
        GraphDocument {
            vertices: g
                .labels()
                .iter()
                .enumerate()
                .map(|(i, l)| VertexEntry {
                    id: i as u64,
                    label: l.clone(),
                })
                .collect(),
            rotation: g
                .rotations()
                .iter()
                .map(|r| r.iter().map(|&v| v as u64).collect())
                .collect(),
            outer: g.outer().iter().map(|&v| v as u64).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<EmbeddedGraph> {
        if self.vertices.is_empty() {
            return Err(Error::Parse("field `vertices`: empty vertex list".into()));
        }
        if self.rotation.len() != self.vertices.len() {
            return Err(Error::Parse(format!(
                "field `rotation`: {} lists for {} vertices",
                self.rotation.len(),
                self.vertices.len()
            )));
        }
        let mut index = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.id, i).is_some() {
                return Err(Error::Parse(format!("field `vertices[{i}]`: duplicate id {}", v.id)));
            }
        }
        let map = |field: &str, id: u64| {
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::Parse(format!("field `{field}`: unknown vertex id {id}")))
        };
        let rotation = self
            .rotation
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .map(|&id| map(&format!("rotation[{i}]"), id))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let outer = self
            .outer
            .iter()
            .map(|&id| map("outer", id))
            .collect::<Result<Vec<_>>>()?;
        let labels = self.vertices.iter().map(|v| v.label.clone()).collect();
        EmbeddedGraph::new(labels, rotation, outer)
    }
}

pub fn parse_graph(bytes: &[u8]) -> Result<EmbeddedGraph> {
    let doc: GraphDocument = serde_json::from_slice(bytes).map_err(|e| {
        Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    doc.to_graph()
}

pub fn serialize_graph(g: &EmbeddedGraph) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("graph serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleEntry {
    pub label: String,
    pub x: i64,
    pub y: i64,
    pub w: i64,
    pub h: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanMeta {
    pub triplet: [String; 3],
    pub paths: Vec<Vec<String>>,
    pub ne: String,
    pub witness: Option<[String; 3]>,
    /// Worklist steps taken while normalizing the labeling.
    pub flip_trace_len: usize,
}

/// On-disk plan. Grid y grows upward; `outline` runs counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDocument {
    pub modules: Vec<ModuleEntry>,
    pub outline: Vec<[i64; 2]>,
    pub concave_corners: Vec<[i64; 2]>,
    pub triplet: [String; 3],
    pub meta: PlanMeta,
}

impl PlanDocument {
    pub fn from_planned(g: &EmbeddedGraph, p: &Planned) -> Self {
        let t = [p.triplet.a, p.triplet.b, p.triplet.c].map(|v| g.label(v).to_string());
        let pt = |q: &(i64, i64)| [q.0, q.1];
        PlanDocument {
            modules: p
                .plan
                .modules
                .iter()
                .map(|(l, r)| ModuleEntry { label: l.clone(), x: r.x, y: r.y, w: r.w, h: r.h })
                .collect(),
            outline: p.plan.outline.iter().map(pt).collect(),
            concave_corners: corner_profile(&p.plan).concave.iter().map(pt).collect(),
            triplet: t.clone(),
            meta: PlanMeta {
                triplet: t,
                paths: p.paths.labels(g),
                ne: p.ne.clone(),
                witness: p.verdict.witness.clone().map(|(a, b, c)| [a, b, c]),
                flip_trace_len: p.flip_steps,
            },
        }
    }

    pub fn to_floorplan(&self) -> Result<FloorPlan> {
        let mut ms = BTreeMap::new();
        for m in &self.modules {
            let r = Rect { x: m.x, y: m.y, w: m.w, h: m.h };
            if ms.insert(m.label.clone(), r).is_some() {
                return Err(Error::Parse(format!("field `modules`: duplicate label {}", m.label)));
            }
        }
        FloorPlan::new(ms)
    }
}

pub fn parse_plan(bytes: &[u8]) -> Result<PlanDocument> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))
}

pub fn serialize_plan(pd: &PlanDocument) -> String {
    serde_json::to_string_pretty(pd).expect("plan serializes")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvgStyle {
    /// Pixels per grid unit.
    pub scale: i64,
    pub stroke: i64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { scale: 40, stroke: 1 }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One rect per module, labels centered, concave corners marked with a dot.
pub fn render_svg(pd: &PlanDocument, style: SvgStyle) -> String {
    let s = style.scale;
    let m = s / 2;
    let xmax = pd.modules.iter().map(|r| r.x + r.w).max().unwrap_or(0);
    let ymax = pd.modules.iter().map(|r| r.y + r.h).max().unwrap_or(0);
    let (w, h) = (xmax * s + 2 * m, ymax * s + 2 * m);
    // grid y points up, SVG y points down
    let sx = |x: i64| x * s + m;
    let sy = |y: i64| (ymax - y) * s + m;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<g fill="white" stroke="black" stroke-width="{}">"#, style.stroke);
    for r in &pd.modules {
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
            sx(r.x),
            sy(r.y + r.h),
            r.w * s,
            r.h * s
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r#"<g font-family="sans-serif" font-size="{}" text-anchor="middle" dominant-baseline="central">"#,
        (s / 3).max(1)
    );
    for r in &pd.modules {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            (sx(r.x) + sx(r.x + r.w)) / 2,
            (sy(r.y) + sy(r.y + r.h)) / 2,
            escape(&r.label)
        );
    }
    let _ = writeln!(out, "</g>");
    for c in &pd.concave_corners {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="red"/>"#,
            sx(c[0]),
            sy(c[1]),
            (s / 8).max(1)
        );
    }
    out.push_str("</svg>\n");
    out
}
