use std::sync::Arc;

use proptest::prelude::*;

use lplan::boundary::find_cips;
use lplan::graph::{same_labeled_embedding, validate_ptpg};
use lplan::io::{parse_graph, serialize_graph};
use lplan::layout::{dual_graph, rfp_from_rel};
use lplan::oracle::{generate_ptpg, GenSpec};
use lplan::paths::four_complete_plain;
use lplan::pipeline::{plan, Outcome, PlanOptions};
use lplan::rel::{construct_rel, flip_edge, flip_vertex, is_flippable_edge, is_flippable_vertex, is_valid_rel};

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn generated_graphs_are_ptpgs(n in 3usize..70, seed in any::<u64>()) {
        let g = generate_ptpg(GenSpec { n, seed, cip_target: None }).unwrap();
        prop_assert!(validate_ptpg(&g).passed());
        prop_assert_eq!(parse_graph(serialize_graph(&g).as_bytes()).unwrap(), g);
    }

    #[test]
    fn flips_keep_labelings_regular(n in 5usize..40, seed in any::<u64>(), picks in prop::collection::vec(any::<u32>(), 1..20)) {
        let g = generate_ptpg(GenSpec { n, seed, cip_target: None }).unwrap();
        let Ok(fc) = four_complete_plain(&g) else { return Ok(()) };
        let mut r = construct_rel(Arc::new(fc.graph), fc.poles).unwrap();
        prop_assert!(is_valid_rel(&r).0);
        for k in picks {
            let ga = r.graph_arc().clone();
            let edges: Vec<_> = ga.edges().into_iter().filter(|&(u, v)| is_flippable_edge(&r, u, v)).collect();
            let verts: Vec<_> = (0..ga.vertex_count()).filter(|&v| is_flippable_vertex(&r, v)).collect();
            let total = edges.len() + verts.len();
            if total == 0 {
                break;
            }
            let i = k as usize % total;
            r = if i < edges.len() { flip_edge(&r, edges[i].0, edges[i].1) } else { flip_vertex(&r, verts[i - edges.len()]) }.unwrap();
            prop_assert!(is_valid_rel(&r).0, "{:?}", is_valid_rel(&r).1);
        }
        let fp = rfp_from_rel(&r).unwrap();
        prop_assert!(same_labeled_embedding(&dual_graph(&fp).unwrap(), &g));
    }

    #[test]
    fn plans_are_faithful(n in 6usize..45, seed in any::<u64>()) {
        let g = generate_ptpg(GenSpec { n, seed, cip_target: None }).unwrap();
        let o = plan(&g, &PlanOptions::default()).unwrap();
        if let Outcome::Plan(p) = &o {
            prop_assert!(p.verdict.nontrivial);
            prop_assert!(same_labeled_embedding(&dual_graph(&p.plan).unwrap(), &g));
        } else {
            prop_assert!(find_cips(&g).len() >= 5 || matches!(o, Outcome::NoTriplet(_)), "{:?}", o.reason());
        }
    }

    #[test]
    fn planning_is_deterministic(n in 6usize..30, seed in any::<u64>()) {
        let g = generate_ptpg(GenSpec { n, seed, cip_target: None }).unwrap();
        let opts = PlanOptions { triplet: None, trace: true };
        prop_assert_eq!(plan(&g, &opts).unwrap(), plan(&g, &opts).unwrap());
    }
}
