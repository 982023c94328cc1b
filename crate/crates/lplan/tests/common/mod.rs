#![allow(dead_code)]

use lplan::boundary::Triplet;
use lplan::io::parse_graph;
use lplan::EmbeddedGraph;

pub fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> EmbeddedGraph {
    parse_graph(&std::fs::read(fixture_path(name)).unwrap()).unwrap()
}

pub fn trip(g: &EmbeddedGraph, a: &str, b: &str, c: &str) -> Triplet {
    Triplet { a: g.find(a).unwrap(), b: g.find(b).unwrap(), c: g.find(c).unwrap() }
}

pub const FIXTURES: [&str; 9] = [
    "illustration_two_cips",
    "illustration_rotations",
    "wheel_no_triplet",
    "six_cips",
    "two_cips_chord",
    "octagon_shortcut",
    "four_cips",
    "five_cips",
    "complex_triangle",
];
