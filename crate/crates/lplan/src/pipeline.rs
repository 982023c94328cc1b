//! End-to-end planning: validation, triplet search, and a plan or a certified refusal.

use std::sync::Arc;

use serde::Serialize;

use crate::boundary::{find_triplets, is_triplet, necessary_conditions, Triplet, MAX_CIPS};
use crate::error::{Error, Result};
use crate::flipping::{normalize_traced, FlipTrace};
use crate::graph::{validate_ptpg, EmbeddedGraph};
use crate::layout::{
    corner_profile, dual_graph, notch_walls_disjoint, remove_ne, rfp_from_rel, verify_nontrivial_l, FloorPlan,
    NonTrivialityVerdict,
};
use crate::paths::{build_completed, select_paths, PathSet, PathViolation};
use crate::rel::{construct_rel, Label, Rel};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlanOptions {
    /// Try only this triplet.
    pub triplet: Option<Triplet>,
    /// Keep intermediate artifacts.
    pub trace: bool,
}

/// Labeled edges as (tail, head, label).
pub type RelEdges = Vec<(String, String, Label)>;

pub fn rel_edges(r: &Rel) -> RelEdges {
    let g = r.graph();
    r.edges()
        .iter()
        .map(|(&(u, v), o)| {
            let (t, h) = if o.tail == u { (u, v) } else { (v, u) };
            (g.label(t).to_string(), g.label(h).to_string(), o.label)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanTrace {
    /// Labels of the four-completed graph, indexed by the ids used in `flips`.
    pub labels: Vec<String>,
    pub pprime: [Vec<String>; 4],
    pub rel_initial: RelEdges,
    pub rel_final: RelEdges,
    pub flips: FlipTrace,
    pub rfp: FloorPlan,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Planned {
    pub plan: FloorPlan,
    pub triplet: Triplet,
    pub paths: PathSet,
    pub ne: String,
    pub verdict: NonTrivialityVerdict,
    pub flip_steps: usize,
    pub trace: Option<PlanTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub triplet: Triplet,
    pub labels: [String; 3],
    pub reason: String,
    pub violations: Vec<PathViolation>,
    pub forced: Option<PathSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Plan(Box<Planned>),
    NoTriplet(Vec<String>),
    TooManyCips(usize),
    InfeasibleAllTriplets(Vec<Refusal>),
}

impl Outcome {
    pub fn is_plan(&self) -> bool {
        matches!(self, Outcome::Plan(_))
    }

    /// One-line description of a refusal.
    pub fn reason(&self) -> Option<String> {
        match self {
            Outcome::Plan(_) => None,
            Outcome::NoTriplet(r) => Some(r.join("; ")),
            Outcome::TooManyCips(k) => Some(format!(
                "too many corner implying paths: {k} > {MAX_CIPS}"
            )),
            Outcome::InfeasibleAllTriplets(rs) => Some(
                rs.iter()
                    .map(|r| format!("triplet ({}): {}", r.labels.join(", "), r.reason))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
        }
    }
}

fn triplet_labels(g: &EmbeddedGraph, t: Triplet) -> [String; 3] {
    [t.a, t.b, t.c].map(|v| g.label(v).to_string())
}

/// Runs every stage for one triplet.
pub fn plan_triplet(g: &EmbeddedGraph, t: Triplet, trace: bool) -> std::result::Result<Planned, Refusal> {
    let refuse = |reason: &str| Refusal {
        triplet: t,
        labels: triplet_labels(g, t),
        reason: reason.to_string(),
        violations: vec![],
        forced: None,
    };
    let ps = select_paths(g, t).map_err(|i| Refusal {
        triplet: t,
        labels: triplet_labels(g, t),
        reason: i.reason,
        violations: i.violations,
        forced: i.forced,
    })?;
    let fail = |e: Error| refuse(&e.to_string());
    let ag = build_completed(g, &ps).map_err(fail)?;
    let poles = ag.poles.expect("four-completed");
    let r0 = construct_rel(Arc::new(ag.graph.clone()), poles).map_err(fail)?;
    let (r, flips) = normalize_traced(&r0, &t, ag.ne, trace).map_err(fail)?;
    let rfp = rfp_from_rel(&r).map_err(fail)?;
    let ne = ag.graph.label(ag.ne).to_string();
    let plan = remove_ne(&rfp, &ne).map_err(fail)?;
    if corner_profile(&plan).concave.len() != 1 {
        return Err(refuse("plan does not have exactly one concave corner"));
    }
    let verdict = verify_nontrivial_l(&plan).map_err(fail)?;
    if !verdict.nontrivial {
        return Err(refuse("plan is a trivial L"));
    }
    if !notch_walls_disjoint(&plan) {
        return Err(refuse("a module touches both walls at the concave corner"));
    }
    let dual = dual_graph(&plan).map_err(fail)?;
    let mut want = g.edges().iter().map(|&(u, v)| label_pair(g, u, v)).collect::<Vec<_>>();
    let mut got = dual.edges().iter().map(|&(u, v)| label_pair(&dual, u, v)).collect::<Vec<_>>();
    want.sort();
    got.sort();
    if want != got {
        return Err(refuse("plan adjacencies differ from the input graph"));
    }
    let trace = trace.then(|| PlanTrace {
        labels: ag.graph.labels().to_vec(),
        pprime: ag.pprime.clone().map(|p| p.iter().map(|&v| ag.graph.label(v).to_string()).collect()),
        rel_initial: rel_edges(&r0),
        rel_final: rel_edges(&r),
        flips: flips.clone(),
        rfp,
    });
    Ok(Planned { plan, triplet: t, paths: ps, ne, verdict, flip_steps: flips.steps, trace })
}

fn label_pair(g: &EmbeddedGraph, u: usize, v: usize) -> (String, String) {
    let (a, b) = (g.label(u).to_string(), g.label(v).to_string());
    if a < b { (a, b) } else { (b, a) }
}

/// Tries triplets in clockwise order and returns the first plan, or why none exists.
pub fn plan(g: &EmbeddedGraph, opts: &PlanOptions) -> Result<Outcome> {
    let report = validate_ptpg(g);
    if !report.passed() {
        return Err(Error::InvalidInput(Box::new(report)));
    }
    let nec = necessary_conditions(g);
    if nec.cip_count > MAX_CIPS {
        return Ok(Outcome::TooManyCips(nec.cip_count));
    }
    let triplets = match opts.triplet {
        Some(t) => {
            if !is_triplet(g, t.a, t.b, t.c) {
                return Ok(Outcome::NoTriplet(vec![format!(
                    "({}, {}, {}) is not an admissible triplet",
                    g.label(t.a),
                    g.label(t.b),
                    g.label(t.c)
                )]));
            }
            vec![t]
        }
        None => find_triplets(g),
    };
    if triplets.is_empty() {
        return Ok(Outcome::NoTriplet(nec.reasons));
    }
    let mut refusals = Vec::new();
    for t in triplets {
        match plan_triplet(g, t, opts.trace) {
            Ok(p) => return Ok(Outcome::Plan(Box::new(p))),
            Err(r) => refusals.push(r),
        }
    }
    Ok(Outcome::InfeasibleAllTriplets(refusals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_graph;

    fn fixture(name: &str) -> EmbeddedGraph {
        let p = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        parse_graph(&std::fs::read(p).unwrap()).unwrap()
    }

    fn trip(g: &EmbeddedGraph, a: &str, b: &str, c: &str) -> Triplet {
        Triplet { a: g.find(a).unwrap(), b: g.find(b).unwrap(), c: g.find(c).unwrap() }
    }

    #[test]
    fn two_cip_illustration_plans() {
        let g = fixture("illustration_two_cips");
        let o = plan(&g, &PlanOptions { triplet: None, trace: true }).unwrap();
        let Outcome::Plan(p) = o else { panic!("{:?}", o.reason()) };
        assert_eq!(p.triplet, trip(&g, "a", "b", "c"));
        assert_eq!(p.paths.labels(&g), [vec!["a", "b", "c"], vec!["c"], vec!["c", "d"], vec!["d", "e", "a"], vec!["a"]]);
        let t = p.trace.unwrap();
        assert_eq!(t.pprime, [vec!["a", "NE"], vec!["NE", "c"], vec!["c", "d"], vec!["d", "e", "a"]]);
        assert_eq!(corner_profile(&p.plan).concave.len(), 1);
        assert_eq!(p.plan.modules.len(), g.vertex_count());
    }

    #[test]
    fn refusals() {
        let o = plan(&fixture("wheel_no_triplet"), &PlanOptions::default()).unwrap();
        assert!(matches!(o, Outcome::NoTriplet(_)));
        let o = plan(&fixture("six_cips"), &PlanOptions::default()).unwrap();
        assert_eq!(o, Outcome::TooManyCips(6));
        assert!(matches!(plan(&fixture("complex_triangle"), &PlanOptions::default()), Err(Error::InvalidInput(_))));
        let g = fixture("illustration_two_cips");
        let o = plan(&g, &PlanOptions { triplet: Some(trip(&g, "a", "b", "d")), trace: false }).unwrap();
        assert!(matches!(o, Outcome::NoTriplet(_)));
    }

    #[test]
    fn pinned_triplet_is_used() {
        let g = fixture("illustration_rotations");
        let t = trip(&g, "b", "c", "d");
        let Outcome::Plan(p) = plan(&g, &PlanOptions { triplet: Some(t), trace: false }).unwrap() else { panic!() };
        assert_eq!(p.triplet, t);
    }

    #[test]
    fn at_most_four_cips_with_a_triplet_always_plans() {
        use crate::boundary::find_cips;
        use crate::oracle::{generate_ptpg, GenSpec};
        for seed in 0..100 {
            let n = 5 + (seed as usize * 11) % 60;
            let g = generate_ptpg(GenSpec { n, seed, cip_target: None }).unwrap();
            if find_cips(&g).len() > 4 || find_triplets(&g).is_empty() {
                continue;
            }
            let o = plan(&g, &PlanOptions::default()).unwrap();
            assert!(o.is_plan(), "seed {seed}: {:?}", o.reason());
        }
    }
}
