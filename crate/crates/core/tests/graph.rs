use intermodal_core::graph::{haversine_m, parse_graph, snap, SnapError};
use intermodal_core::{Graph, GraphError, Mode, VehicleKind};
use intermodal_fixtures::{self as fx, RandomShape};
use proptest::prelude::*;

#[test]
fn two_node_graph_counts() {
    let graph = fx::single_walk_edge().graph;
    assert_eq!(graph.node_count(), 2);
    assert_eq!(graph.edge_count(), 1);
    assert_eq!(graph.meta().name, "single-walk-edge");
}

#[test]
fn demo_city_loads() {
    let graph = parse_graph(fx::demo_city_json()).unwrap();
    assert!(graph.node_count() > 20);
    assert!(graph.lines().len() >= 2);
    assert!(graph.parking().iter().any(|p| p.accepts(VehicleKind::Motorhome)));
}

#[test]
fn unknown_mode_is_rejected() {
    let text = r#"{"nodes":[{"id":"A","lat":0,"lon":0},{"id":"B","lat":0,"lon":0.001}],
        "edges":[{"from":"A","to":"B","length_m":10,"allowed":{"scooter":10}}]}"#;
    let err = parse_graph(text).unwrap_err();
    assert!(
        matches!(err, GraphError::Malformed(ref m) if m.contains("scooter")),
        "{err}"
    );
}

#[test]
fn dangling_edge_is_rejected() {
    let text = r#"{"nodes":[{"id":"A","lat":0,"lon":0}],
        "edges":[{"from":"A","to":"Z","length_m":10,"allowed":{"walk":5}}]}"#;
    assert_eq!(
        parse_graph(text).unwrap_err(),
        GraphError::DanglingNode {
            entity: r#"edge[0] "A"->"Z""#.into(),
            node: "Z".into()
        }
    );
}

#[test]
fn snapping_picks_the_nearest_node_within_range() {
    let graph = fx::narrow_core().graph;
    let c = graph.node(graph.node_idx("C").unwrap());
    let near = snap(&graph, c.lat + 0.0005, c.lon).unwrap();
    assert_eq!(graph.node_id(near), "C");
    match snap(&graph, 10.0, 10.0) {
        Err(SnapError::TooFar { distance_m, .. }) => assert!(distance_m > 500.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn haversine_quarter_meridian() {
    // A quarter of a great circle on a sphere of radius 6371008.8 m.
    let expected = std::f64::consts::FRAC_PI_2 * 6_371_008.8;
    assert!((haversine_m(0.0, 0.0, 90.0, 0.0) - expected).abs() < 1e-6);
}

#[test]
fn grid_has_the_advertised_size() {
    let f = fx::grid(200, 250);
    assert_eq!(f.graph.node_count(), 50_000);
    assert!(f.graph.edge_count() >= 149_000);
    assert_eq!(f.request.vehicles.len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let graph = fx::random_fixture(seed, RandomShape { min_nodes: 2, max_nodes: 10, edge_density: 0.3 }).graph;
        let json = graph.to_json();
        let again = parse_graph(&json).unwrap();
        prop_assert_eq!(again.to_json(), json);
        prop_assert_eq!(again.node_count(), graph.node_count());
        prop_assert_eq!(again.edge_count(), graph.edge_count());
        for e in 0..graph.edge_count() {
            let e = intermodal_core::EdgeIdx(e as u32);
            for mode in Mode::ALL {
                prop_assert_eq!(graph.edge(e).speed(mode), again.edge(e).speed(mode));
            }
        }
    }

    #[test]
    fn out_edges_start_at_their_node(seed in any::<u64>()) {
        let graph: Graph = fx::random_fixture(seed, RandomShape::default()).graph;
        let mut seen = 0;
        for n in 0..graph.node_count() {
            let n = intermodal_core::NodeIdx(n as u32);
            for &e in graph.out_edges(n) {
                prop_assert_eq!(graph.edge(e).from, n);
                seen += 1;
            }
        }
        prop_assert_eq!(seen, graph.edge_count());
    }
}
