use proptest::prelude::*;
use zpflow::gen::Gen;
use zpflow::io::{
    boundary_to_json, boundary_to_text, edge_values_to_json, edge_values_to_text, family_to_json, lists_to_json,
    lists_to_text, parse_boundary, parse_edge_values, parse_family, parse_lists, DigraphInstance, GraphInstance,
};
use zpflow::Modulus;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_and_digraph_round_trip(seed in any::<u64>(), n in 2usize..8, e in 0usize..15) {
        let m = Modulus::new(7).unwrap();
        let mut g = Gen::new(seed);
        let graph = GraphInstance { modulus: m, graph: g.multigraph(n, e).unwrap() };
        prop_assert_eq!(&GraphInstance::parse(&graph.to_text()).unwrap(), &graph);
        prop_assert_eq!(&GraphInstance::parse(&graph.to_json()).unwrap(), &graph);
        let d = DigraphInstance { modulus: m, digraph: g.digraph(n, e).unwrap() };
        prop_assert_eq!(&DigraphInstance::parse(&d.to_text()).unwrap(), &d);
        prop_assert_eq!(&DigraphInstance::parse(&d.to_json()).unwrap(), &d);
    }

    #[test]
    fn vertex_and_arc_data_round_trip(seed in any::<u64>(), p in prop::sample::select(vec![3u32, 5, 9]), n in 2usize..8, e in 0usize..15) {
        let m = Modulus::new(p).unwrap();
        let mut g = Gen::new(seed);
        let d = g.digraph(n, e).unwrap();
        let beta = g.boundary(m, d.vertices());
        prop_assert_eq!(&parse_boundary(&boundary_to_text(&beta), m, n).unwrap(), &beta);
        prop_assert_eq!(&parse_boundary(&boundary_to_json(&beta), m, n).unwrap(), &beta);
        let lists = g.lists(m, &d);
        prop_assert_eq!(&parse_lists(&lists_to_text(&lists), m, e).unwrap(), &lists);
        prop_assert_eq!(&parse_lists(&lists_to_json(&lists), m, e).unwrap(), &lists);
        let w = g.weights(m, d.underlying());
        prop_assert_eq!(&parse_edge_values(&edge_values_to_text(&w), m, e).unwrap(), &w);
        prop_assert_eq!(&parse_edge_values(&edge_values_to_json(&w), m, e).unwrap(), &w);
    }

    #[test]
    fn families_round_trip(seed in any::<u64>(), n in 2usize..5, t in 1usize..8) {
        let mut g = Gen::new(seed);
        let fam = g.family(5, n, 2, t.max(2), 0.3).unwrap();
        prop_assert_eq!(&parse_family(&family_to_json(&fam)).unwrap(), &fam);
        let zs = g.zero_sum_family(3, n, t).unwrap();
        prop_assert_eq!(&parse_family(&family_to_json(&zs)).unwrap(), &zs);
    }
}
