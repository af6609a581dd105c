//! Intermodal route planning.
//!
//! The traveler names the modes they are *willing* to use and where their
//! own vehicles are; the planner decides which modes to use and where to
//! switch between them. Alternatives come from re-running the same
//! fastest-route search under different per-mode perception multipliers.
//!
//! ```
//! use intermodal_core::{parse_graph, shortest_route, Mode, ModeSet, MultiplierProfile, RoutingRequest};
//!
//! let graph = parse_graph(r#"{
//!     "nodes": [{"id": "A", "lat": 48.2, "lon": 16.37}, {"id": "B", "lat": 48.2027, "lon": 16.37}],
//!     "edges": [{"from": "A", "to": "B", "length_m": 300, "allowed": {"walk": 5}}]
//! }"#).unwrap();
//! let a = graph.node_idx("A").unwrap();
//! let b = graph.node_idx("B").unwrap();
//! let request = RoutingRequest::new(a, b, ModeSet::ALL);
//! let route = shortest_route(&graph, &request, &MultiplierProfile::neutral()).unwrap();
//! assert_eq!(route.legs.len(), 1);
//! assert_eq!(route.legs[0].mode, Mode::Walk);
//! assert_eq!(route.total_duration.as_secs_f64(), 216.0);
//! ```

pub mod alternatives;
pub mod graph;
pub mod motorhome;
pub mod overlay;
pub mod profile;
pub mod request;
pub mod search;
pub mod units;

pub use alternatives::{
    generate_alternatives, generate_alternatives_with, plausibility_filter, Alternative, AlternativeSet,
    PlausibilityThresholds, ProfileFamily,
};
pub use graph::{
    parse_graph, snap, Dimensions, Edge, EdgeIdx, Graph, GraphDocument, GraphError, LineIdx, Mode, ModeSet, Node,
    NodeIdx, ParkingFacility, VehicleKind,
};
pub use motorhome::{three_option_routes, MotorhomeLabel, MotorhomeOption, MotorhomeRequest};
pub use overlay::{Network, OverrideSet, SpeedOverride};
pub use profile::MultiplierProfile;
pub use request::{Objective, OwnedVehicle, RoutingRequest, SwitchCosts, VehicleUsage};
pub use search::{
    enumerate_feasible_routes, plan, shortest_distance_route, shortest_route, Route, RouteLeg, SearchError,
};
pub use units::{Micros, PerceivedCost};
