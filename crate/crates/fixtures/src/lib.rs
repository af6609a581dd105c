//! Hand-built networks that pin down planner behaviour, a seeded generator
//! of small random networks for oracle checks, and a large grid for timing.

use intermodal_core::graph::{EdgeDoc, MetaDoc, NodeDoc, ParkingDoc, TransitLineDoc};
use intermodal_core::{
    Graph, GraphDocument, Mode, ModeSet, MultiplierProfile, NodeIdx, RoutingRequest, SwitchCosts, VehicleKind,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

/// Incremental graph document builder.
#[derive(Debug, Clone)]
pub struct Builder {
    doc: GraphDocument,
}

impl Builder {
    pub fn new(name: &str) -> Self {
        Builder {
            doc: GraphDocument {
                meta: MetaDoc { name: name.to_string() },
                nodes: Vec::new(),
                edges: Vec::new(),
                transit_lines: Vec::new(),
                parking: Vec::new(),
            },
        }
    }

    pub fn node(mut self, id: &str, lat: f64, lon: f64) -> Self {
        self.doc.nodes.push(NodeDoc {
            id: id.to_string(),
            lat,
            lon,
        });
        self
    }

    pub fn edge(mut self, from: &str, to: &str, length_m: f64, speeds: &[(Mode, f64)]) -> Self {
        self.doc.edges.push(EdgeDoc {
            from: from.to_string(),
            to: to.to_string(),
            length_m,
            allowed: speeds.iter().copied().collect(),
            transit_line: None,
            max_width_m: None,
            max_length_m: None,
            max_height_m: None,
            max_weight_kg: None,
        });
        self
    }

    pub fn two_way(self, a: &str, b: &str, length_m: f64, speeds: &[(Mode, f64)]) -> Self {
        self.edge(a, b, length_m, speeds).edge(b, a, length_m, speeds)
    }

    /// Restricts the width of the most recently added `n` edges.
    pub fn narrow_last(mut self, n: usize, max_width_m: f64) -> Self {
        let len = self.doc.edges.len();
        for e in &mut self.doc.edges[len - n..] {
            e.max_width_m = Some(max_width_m);
        }
        self
    }

    pub fn line(mut self, id: &str, headway_s: f64) -> Self {
        self.doc.transit_lines.push(TransitLineDoc {
            id: id.to_string(),
            headway_s,
        });
        self
    }

    pub fn transit(mut self, from: &str, to: &str, length_m: f64, speed_kmh: f64, line: &str) -> Self {
        self.doc.edges.push(EdgeDoc {
            from: from.to_string(),
            to: to.to_string(),
            length_m,
            allowed: [(Mode::PublicTransport, speed_kmh)].into_iter().collect(),
            transit_line: Some(line.to_string()),
            max_width_m: None,
            max_length_m: None,
            max_height_m: None,
            max_weight_kg: None,
        });
        self
    }

    pub fn parking(mut self, node: &str, accepts: &[VehicleKind]) -> Self {
        self.doc.parking.push(ParkingDoc {
            node: node.to_string(),
            accepts: accepts.to_vec(),
            capacity_width_m: None,
            capacity_length_m: None,
        });
        self
    }

    pub fn document(self) -> GraphDocument {
        self.doc
    }

    pub fn build(self) -> Graph {
        Graph::from_document(self.doc).expect("fixture graphs are valid")
    }
}

fn idx(graph: &Graph, id: &str) -> NodeIdx {
    graph.node_idx(id).unwrap_or_else(|| panic!("fixture has no node {id}"))
}

/// A graph plus a request against it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub graph: Graph,
    pub request: RoutingRequest,
}

impl Fixture {
    pub fn node(&self, id: &str) -> NodeIdx {
        idx(&self.graph, id)
    }
}

use Mode::{Bike, Car, Motorhome, Walk};

const ROAD_ALL: &[(Mode, f64)] = &[(Walk, 5.0), (Bike, 15.0), (Car, 50.0), (Motorhome, 40.0)];

/// Direct walk of 15 minutes (1250 m at 5 km/h) against a bike ride of 11
/// minutes (2750 m at 15 km/h). The bike stands at A, bike parking at B,
/// and switches are free, so the two routes cost exactly 15 and 11 minutes
/// of in-motion time.
pub fn walk_or_bike() -> Fixture {
    let graph = Builder::new("walk-15-bike-11")
        .node("A", 48.2000, 16.3700)
        .node("B", 48.2110, 16.3700)
        .edge("A", "B", 1250.0, &[(Walk, 5.0)])
        .edge("A", "B", 2750.0, &[(Bike, 15.0)])
        .parking("B", &[VehicleKind::Bike])
        .build();
    let (a, b) = (idx(&graph, "A"), idx(&graph, "B"));
    let request = RoutingRequest::new(a, b, ModeSet::ALL)
        .with_vehicle(VehicleKind::Bike, a)
        .with_switch_costs(SwitchCosts::ZERO);
    Fixture { graph, request }
}

/// Walk 2, bike 3, everything else 100.
pub fn walk2_bike3() -> MultiplierProfile {
    MultiplierProfile::new("walk2-bike3", [2.0, 3.0, 100.0, 100.0, 100.0]).unwrap()
}

/// The origin O sits 100 m from a stop S of line L (headway 600 s) that
/// reaches the destination B in 400 s. The traveler's bike is parked at K,
/// 3.5 km away on the far side of O, and bike&ride parking exists at S and B.
pub fn stop_next_door_bike_far_away() -> Fixture {
    let graph = Builder::new("bike-far-off-direction")
        .node("K", 48.1685, 16.3700)
        .node("O", 48.2000, 16.3700)
        .node("S", 48.2009, 16.3700)
        .node("B", 48.2369, 16.3700)
        .two_way("O", "K", 3500.0, &[(Walk, 5.0), (Bike, 15.0)])
        .two_way("O", "S", 100.0, &[(Walk, 5.0), (Bike, 15.0)])
        .two_way("S", "B", 4000.0, &[(Walk, 5.0), (Bike, 15.0)])
        .line("L", 600.0)
        .transit("S", "B", 4000.0, 36.0, "L")
        .parking("S", &[VehicleKind::Bike])
        .parking("B", &[VehicleKind::Bike])
        .build();
    let (o, b, k) = (idx(&graph, "O"), idx(&graph, "B"), idx(&graph, "K"));
    let request = RoutingRequest::new(o, b, ModeSet::ALL).with_vehicle(VehicleKind::Bike, k);
    Fixture { graph, request }
}

/// As [`stop_next_door_bike_far_away`] but with the bike at the origin and
/// the stop only 60 m away, so a walk-averse traveler is tempted into a
/// 60 m bike hop before boarding.
pub fn sixty_metre_bike_hop() -> Fixture {
    let graph = Builder::new("sixty-metre-bike-hop")
        .node("O", 48.2000, 16.3700)
        .node("S", 48.20054, 16.3700)
        .node("B", 48.2365, 16.3700)
        .two_way("O", "S", 60.0, &[(Walk, 5.0), (Bike, 15.0)])
        .two_way("S", "B", 4000.0, &[(Walk, 5.0), (Bike, 15.0)])
        .line("L", 600.0)
        .transit("S", "B", 4000.0, 36.0, "L")
        .parking("S", &[VehicleKind::Bike])
        .build();
    let (o, b) = (idx(&graph, "O"), idx(&graph, "B"));
    let request = RoutingRequest::new(o, b, ModeSet::ALL).with_vehicle(VehicleKind::Bike, o);
    Fixture { graph, request }
}

/// A long motorway from home H to the ring road R, where motorhome parking
/// and a stop of line U1 to the destination D exist. The only road into the
/// core (gate G to car park C) is 2.0 m wide, too narrow for a 2.3 m
/// motorhome. D is a 300 m walk from C.
pub fn narrow_core() -> Fixture {
    let graph = Builder::new("narrow-core")
        .node("H", 48.0000, 16.0000)
        .node("R", 48.1800, 16.3500)
        .node("G", 48.1890, 16.3500)
        .node("C", 48.1935, 16.3500)
        .node("D", 48.1962, 16.3500)
        .node("X", 48.1850, 16.3550)
        .two_way(
            "H",
            "R",
            30000.0,
            &[(Walk, 5.0), (Bike, 15.0), (Car, 100.0), (Motorhome, 80.0)],
        )
        .two_way(
            "R",
            "G",
            1000.0,
            &[(Walk, 5.0), (Bike, 15.0), (Car, 50.0), (Motorhome, 40.0)],
        )
        .two_way(
            "G",
            "C",
            500.0,
            &[(Walk, 5.0), (Bike, 15.0), (Car, 30.0), (Motorhome, 30.0)],
        )
        .narrow_last(2, 2.0)
        .two_way("C", "D", 300.0, &[(Walk, 5.0)])
        .two_way("R", "X", 600.0, &[(Walk, 5.0)])
        .line("U1", 300.0)
        .transit("X", "D", 2000.0, 30.0, "U1")
        .transit("D", "X", 2000.0, 30.0, "U1")
        .parking("R", &[VehicleKind::Motorhome])
        .parking("C", &[VehicleKind::Car])
        .build();
    let (h, d) = (idx(&graph, "H"), idx(&graph, "D"));
    let request = RoutingRequest::new(h, d, ModeSet::ALL).with_vehicle(VehicleKind::Motorhome, h);
    Fixture { graph, request }
}

/// The only car park Q is also the facility nearest to D. From Q a tram
/// beats the 2.4 km walk.
pub fn single_car_park() -> Fixture {
    let graph = Builder::new("single-car-park")
        .node("H", 48.0000, 16.0000)
        .node("Q", 48.1800, 16.3500)
        .node("D", 48.2016, 16.3500)
        .two_way("H", "Q", 30000.0, &[(Car, 100.0), (Motorhome, 80.0)])
        .two_way("Q", "D", 2400.0, &[(Walk, 5.0)])
        .line("T", 240.0)
        .transit("Q", "D", 2400.0, 30.0, "T")
        .parking("Q", &[VehicleKind::Car])
        .build();
    let (h, d) = (idx(&graph, "H"), idx(&graph, "D"));
    let request = RoutingRequest::new(h, d, ModeSet::ALL).with_vehicle(VehicleKind::Motorhome, h);
    Fixture { graph, request }
}

/// Two walking paths A->B: 400 m at 3 km/h via M1 (480 s) and 600 m at
/// 6 km/h via M2 (360 s).
pub fn short_slow_or_long_fast() -> Fixture {
    let graph = Builder::new("short-slow-long-fast")
        .node("A", 48.2000, 16.3700)
        .node("M1", 48.2018, 16.3700)
        .node("M2", 48.2000, 16.3740)
        .node("B", 48.2036, 16.3700)
        .edge("A", "M1", 200.0, &[(Walk, 3.0)])
        .edge("M1", "B", 200.0, &[(Walk, 3.0)])
        .edge("A", "M2", 300.0, &[(Walk, 6.0)])
        .edge("M2", "B", 300.0, &[(Walk, 6.0)])
        .build();
    let (a, b) = (idx(&graph, "A"), idx(&graph, "B"));
    let request = RoutingRequest::new(a, b, ModeSet::ALL);
    Fixture { graph, request }
}

/// Five nodes with a car at the origin, car-only and walk-only shortcuts,
/// and parking at two places.
pub fn five_node_car_walk() -> Fixture {
    let graph = Builder::new("five-node-car-walk")
        .node("A", 48.2000, 16.3700)
        .node("B", 48.2050, 16.3700)
        .node("C", 48.2050, 16.3800)
        .node("D", 48.2100, 16.3800)
        .node("E", 48.2000, 16.3800)
        .two_way("A", "B", 600.0, &[(Walk, 5.0), (Car, 40.0)])
        .two_way("B", "C", 800.0, &[(Car, 50.0)])
        .two_way("B", "D", 1300.0, &[(Walk, 5.0)])
        .two_way("C", "D", 600.0, &[(Walk, 5.0), (Car, 30.0)])
        .two_way("A", "E", 750.0, &[(Walk, 5.0), (Car, 40.0)])
        .two_way("E", "C", 550.0, &[(Walk, 5.0)])
        .parking("C", &[VehicleKind::Car])
        .parking("E", &[VehicleKind::Car, VehicleKind::Bike])
        .build();
    let (a, d) = (idx(&graph, "A"), idx(&graph, "D"));
    let request = RoutingRequest::new(a, d, ModeSet::ALL).with_vehicle(VehicleKind::Car, a);
    Fixture { graph, request }
}

/// Two islands with no edge between them.
pub fn disconnected() -> Fixture {
    let graph = Builder::new("disconnected")
        .node("A", 48.2000, 16.3700)
        .node("B", 48.2010, 16.3700)
        .node("C", 48.3000, 16.3700)
        .node("D", 48.3010, 16.3700)
        .two_way("A", "B", 100.0, ROAD_ALL)
        .two_way("C", "D", 100.0, ROAD_ALL)
        .build();
    let (a, d) = (idx(&graph, "A"), idx(&graph, "D"));
    let request = RoutingRequest::new(a, d, ModeSet::ALL).with_vehicle(VehicleKind::Car, a);
    Fixture { graph, request }
}

/// One 300 m walk edge.
pub fn single_walk_edge() -> Fixture {
    let graph = Builder::new("single-walk-edge")
        .node("A", 48.2000, 16.3700)
        .node("B", 48.2027, 16.3700)
        .edge("A", "B", 300.0, &[(Walk, 5.0)])
        .build();
    let (a, b) = (idx(&graph, "A"), idx(&graph, "B"));
    let request = RoutingRequest::new(a, b, ModeSet::ALL);
    Fixture { graph, request }
}

/// A bike-friendly neighbourhood where cycling is fastest and a bus comes
/// second. Used with a bike-averse profile to produce two alternatives.
pub fn bike_fastest_bus_second() -> Fixture {
    let graph = Builder::new("bike-fastest-bus-second")
        .node("O", 48.2000, 16.3700)
        .node("S", 48.2010, 16.3700)
        .node("T", 48.2190, 16.3700)
        .node("B", 48.2200, 16.3700)
        .two_way("O", "S", 150.0, &[(Walk, 5.0), (Bike, 15.0)])
        .two_way("S", "T", 2000.0, &[(Walk, 5.0), (Bike, 18.0)])
        .two_way("T", "B", 150.0, &[(Walk, 5.0), (Bike, 15.0)])
        .line("7", 300.0)
        .transit("S", "T", 2000.0, 24.0, "7")
        .build();
    let (o, b) = (idx(&graph, "O"), idx(&graph, "B"));
    let request = RoutingRequest::new(o, b, ModeSet::ALL).with_vehicle(VehicleKind::Bike, o);
    Fixture { graph, request }
}

/// Options for [`random_fixture`].
#[derive(Debug, Clone, Copy)]
pub struct RandomShape {
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Probability that a given ordered node pair gets a road edge.
    pub edge_density: f64,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape {
            min_nodes: 4,
            max_nodes: 7,
            edge_density: 0.3,
        }
    }
}

/// A small random network exercising all five modes, with up to three
/// owned vehicles, some narrow roads and assorted parking.
pub fn random_fixture(seed: u64, shape: RandomShape) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(shape.min_nodes..=shape.max_nodes);
    let mut b = Builder::new(&format!("random-{seed}"));
    let ids: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
    let mut coords = Vec::with_capacity(n);
    for id in &ids {
        let lat = 48.2 + rng.random_range(0.0..0.02);
        let lon = 16.37 + rng.random_range(0.0..0.03);
        coords.push((lat, lon));
        b = b.node(id, lat, lon);
    }
    let dist = |i: usize, j: usize| {
        let (a, c) = (coords[i], coords[j]);
        intermodal_core::graph::haversine_m(a.0, a.1, c.0, c.1).max(50.0)
    };

    for i in 0..n {
        for j in 0..n {
            if i == j || !rng.random_bool(shape.edge_density) {
                continue;
            }
            let length = (dist(i, j) * rng.random_range(1.0..1.4)).round();
            let mut speeds = Vec::new();
            if rng.random_bool(0.8) {
                speeds.push((Walk, rng.random_range(4..=6) as f64));
            }
            if rng.random_bool(0.6) {
                speeds.push((Bike, rng.random_range(12..=20) as f64));
            }
            if rng.random_bool(0.55) {
                speeds.push((Car, rng.random_range(30..=70) as f64));
                if rng.random_bool(0.7) {
                    speeds.push((Motorhome, rng.random_range(25..=60) as f64));
                }
            }
            if speeds.is_empty() {
                speeds.push((Walk, 5.0));
            }
            b = b.edge(&ids[i], &ids[j], length, &speeds);
            if rng.random_bool(0.15) {
                b = b.narrow_last(1, 2.0);
            }
        }
    }

    let line_len = rng.random_range(2..=n.min(4));
    let mut stops: Vec<usize> = (0..n).collect();
    stops.shuffle(&mut rng);
    stops.truncate(line_len);
    b = b.line("L1", rng.random_range(2..=12) as f64 * 60.0);
    for w in stops.windows(2) {
        let length = (dist(w[0], w[1]) * 1.1).round();
        let speed = rng.random_range(20..=40) as f64;
        b = b.transit(&ids[w[0]], &ids[w[1]], length, speed, "L1");
        if rng.random_bool(0.5) {
            b = b.transit(&ids[w[1]], &ids[w[0]], length, speed, "L1");
        }
    }

    for id in &ids {
        if rng.random_bool(0.35) {
            let mut kinds: Vec<VehicleKind> = VehicleKind::ALL.into_iter().filter(|_| rng.random_bool(0.5)).collect();
            if kinds.is_empty() {
                kinds.push(VehicleKind::Car);
            }
            b = b.parking(id, &kinds);
        }
    }

    let graph = b.build();
    let origin = rng.random_range(0..n);
    let mut destination = rng.random_range(0..n - 1);
    if destination >= origin {
        destination += 1;
    }
    let mut request = RoutingRequest::new(NodeIdx(origin as u32), NodeIdx(destination as u32), ModeSet::ALL);
    for kind in VehicleKind::ALL {
        if rng.random_bool(0.6) {
            let at = if rng.random_bool(0.5) {
                origin
            } else {
                rng.random_range(0..n)
            };
            request = request.with_vehicle(kind, NodeIdx(at as u32));
        }
    }
    Fixture { graph, request }
}

/// Deterministic generator for test-side randomness.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonempty subset of modes.
pub fn random_modes(rng: &mut impl Rng) -> ModeSet {
    loop {
        let set: ModeSet = Mode::ALL.into_iter().filter(|_| rng.random_bool(0.5)).collect();
        if !set.is_empty() {
            return set;
        }
    }
}

/// A random valid profile.
pub fn random_profile(rng: &mut impl Rng, id: &str) -> MultiplierProfile {
    let mut values = [1.0; 5];
    for v in &mut values {
        *v = (rng.random_range(1.0..=100.0f64) * 100.0).round() / 100.0;
    }
    MultiplierProfile::new(id, values).unwrap()
}

/// `rows * cols` grid, 100 m blocks. Streets run both ways east-west and
/// alternate direction north-south. Every street allows walking, cycling and
/// driving; an express tram runs along the middle row with a stop every ten
/// blocks. A bike waits at the origin corner and a car one block away.
pub fn grid(rows: usize, cols: usize) -> Fixture {
    let id = |r: usize, c: usize| format!("g{r}_{c}");
    let mut b = Builder::new(&format!("grid-{rows}x{cols}"));
    for r in 0..rows {
        for c in 0..cols {
            b = b.node(&id(r, c), 48.0 + r as f64 * 0.0009, 16.0 + c as f64 * 0.00135);
        }
    }
    let street: &[(Mode, f64)] = &[(Walk, 5.0), (Bike, 15.0), (Car, 40.0)];
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                b = b.two_way(&id(r, c), &id(r, c + 1), 100.0, street);
            }
            if r + 1 < rows {
                if c % 2 == 0 {
                    b = b.edge(&id(r, c), &id(r + 1, c), 100.0, street);
                } else {
                    b = b.edge(&id(r + 1, c), &id(r, c), 100.0, street);
                }
            }
        }
    }
    let mid = rows / 2;
    b = b.line("X", 300.0);
    let mut c = 0;
    while c + 10 < cols {
        b = b.transit(&id(mid, c), &id(mid, c + 10), 1000.0, 45.0, "X");
        b = b.transit(&id(mid, c + 10), &id(mid, c), 1000.0, 45.0, "X");
        c += 10;
    }
    for r in (0..rows).step_by(5) {
        for c in (0..cols).step_by(5) {
            b = b.parking(&id(r, c), &[VehicleKind::Bike, VehicleKind::Car]);
        }
    }
    let graph = b.build();
    let origin = idx(&graph, &id(0, 0));
    let destination = idx(&graph, &id(rows - 1, cols - 1));
    let request = RoutingRequest::new(origin, destination, ModeSet::ALL)
        .with_vehicle(VehicleKind::Bike, origin)
        .with_vehicle(VehicleKind::Car, idx(&graph, &id(0, 1)));
    Fixture { graph, request }
}

/// Serialized demo network shipped with the service.
pub fn demo_city_json() -> &'static str {
    include_str!("../../../data/demo-city.json")
}

/// A single 1000 m street driven at 40 km/h (90 s) from the car at A to a
/// car park at B, with free switches.
pub fn car_hop() -> Fixture {
    let graph = Builder::new("car-hop")
        .node("A", 48.2000, 16.3700)
        .node("B", 48.2090, 16.3700)
        .two_way("A", "B", 1000.0, &[(Car, 40.0)])
        .parking("B", &[VehicleKind::Car])
        .build();
    let (a, b) = (idx(&graph, "A"), idx(&graph, "B"));
    let request = RoutingRequest::new(a, b, ModeSet::ALL)
        .with_vehicle(VehicleKind::Car, a)
        .with_switch_costs(SwitchCosts::ZERO);
    Fixture { graph, request }
}
