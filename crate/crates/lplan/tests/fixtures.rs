mod common;

use common::{fixture, trip, FIXTURES};
use lplan::boundary::{find_cips, find_shortcuts};
use lplan::graph::{same_labeled_embedding, validate_ptpg};
use lplan::io::{parse_graph, parse_plan, render_svg, serialize_graph, serialize_plan, PlanDocument, SvgStyle};
use lplan::layout::{corner_profile, dual_graph};
use lplan::pipeline::{plan, Outcome, PlanOptions};
use lplan::Error;

#[test]
fn documents_round_trip() {
    for name in FIXTURES {
        let g = fixture(name);
        assert_eq!(parse_graph(serialize_graph(&g).as_bytes()).unwrap(), g, "{name}");
    }
}

#[test]
fn fig5_style_shortcut() {
    let g = fixture("two_cips_chord");
    let s: Vec<_> = find_shortcuts(&g).iter().map(|s| (g.label(s.u).to_string(), g.label(s.v).to_string())).collect();
    assert!(!s.is_empty());
    assert_eq!(find_cips(&g).len(), 2);
}

#[test]
fn bad_documents() {
    let err = |s: &str| parse_graph(s.as_bytes()).unwrap_err().to_string();
    assert!(err(r#"{"vertices": [], "rotation": [], "outer": []}"#).contains("empty vertex list"));
    assert!(err(r#"{"vertices": [{"id": 1, "label": "a"}], "rotation": [[2]], "outer": [1]}"#).contains("unknown vertex id 2"));
    assert!(err(r#"{"vertices": [], "rotation": [], "outer": [], "x": 1}"#).contains("unknown field"));
    assert!(err("{\n  \"vertices\": 3\n}").contains("line 2"));
    // a wrong rotation is an embedding error, not a parse error
    let doc = r#"{"vertices": [{"id": 0, "label": "a"}, {"id": 1, "label": "b"}, {"id": 2, "label": "c"}],
        "rotation": [[1, 2], [0, 2], [0]], "outer": [0, 1, 2]}"#;
    assert!(matches!(parse_graph(doc.as_bytes()), Err(Error::InconsistentEmbedding(_))));
}

#[test]
fn complex_triangle_rejected() {
    let g = fixture("complex_triangle");
    let rep = validate_ptpg(&g);
    assert!(!rep.passed());
    assert_eq!(rep.separating_triangles.len(), 1);
}

#[test]
fn two_cip_illustration_end_to_end() {
    let g = fixture("illustration_two_cips");
    let Outcome::Plan(p) = plan(&g, &PlanOptions::default()).unwrap() else { panic!() };
    assert_eq!(p.triplet, trip(&g, "a", "b", "c"));
    assert_eq!(corner_profile(&p.plan).concave.len(), 1);
    assert_eq!(corner_profile(&p.plan).convex.len(), 5);
    assert!(p.verdict.nontrivial);
    assert!(same_labeled_embedding(&dual_graph(&p.plan).unwrap(), &g));
}

#[test]
fn plan_document_round_trip_and_svg() {
    let g = fixture("illustration_rotations");
    let Outcome::Plan(p) = plan(&g, &PlanOptions::default()).unwrap() else { panic!() };
    let doc = PlanDocument::from_planned(&g, &p);
    let text = serialize_plan(&doc);
    let back = parse_plan(text.as_bytes()).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_floorplan().unwrap(), p.plan);
    let svg = render_svg(&doc, SvgStyle::default());
    assert_eq!(svg.matches("<rect").count(), doc.modules.len());
    assert_eq!(svg.matches("<circle").count(), 1);
    assert_eq!(svg, render_svg(&back, SvgStyle::default()));
}

#[test]
fn unit_square_svg() {
    let doc: PlanDocument = serde_json::from_str(
        r#"{"modules": [{"label": "a", "x": 0, "y": 0, "w": 1, "h": 1}],
            "outline": [[0, 0], [1, 0], [1, 1], [0, 1]], "concave_corners": [],
            "triplet": ["a", "b", "c"],
            "meta": {"triplet": ["a", "b", "c"], "paths": [], "ne": "NE", "witness": null, "flip_trace_len": 0}}"#,
    )
    .unwrap();
    let svg = render_svg(&doc, SvgStyle::default());
    assert_eq!(svg.matches("<rect").count(), 1);
    assert!(svg.contains(r#"width="40" height="40""#));
}
