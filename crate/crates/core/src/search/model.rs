//! The implicit layered graph: search states and the transitions between
//! them. Both the Dijkstra search and the exhaustive enumerator walk this
//! model, so feasibility rules live here only.

use crate::graph::{Dimensions, EdgeIdx, Graph, LineIdx, Mode, NodeIdx, VehicleKind};
use crate::overlay::Network;
use crate::request::RoutingRequest;
use crate::units::{travel_time, Micros};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Carrier {
    OnFoot,
    /// Riding the request vehicle with this index.
    Riding(u8),
    OnTransit(LineIdx),
}

/// `used` is a bit set of vehicle indices already parked during the trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct State {
    pub node: NodeIdx,
    pub carrier: Carrier,
    pub used: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    /// Traverse an edge. `network` selects the speed column, `leg` the
    /// multiplier.
    Edge {
        edge: EdgeIdx,
        network: Mode,
        leg: Mode,
    },
    Board(LineIdx),
    Alight,
    Pickup(u8),
    Drop(u8),
    /// Reach the destination, parking the ridden vehicle if any.
    Finish(Option<u8>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct StepCost {
    pub time: Micros,
    /// Mode whose multiplier weighs `time`.
    pub mode: Mode,
    pub distance_mm: u64,
}

#[derive(Debug, Clone)]
pub(crate) struct VehicleSlot {
    pub leg_mode: Mode,
    pub network_mode: Mode,
    pub park_as: VehicleKind,
    /// `None` when restrictions are ignored.
    pub dims: Option<Dimensions>,
    pub location: NodeIdx,
    pub usable: bool,
    pub implicit_parking: bool,
    pub pickup: Micros,
    pub park: Micros,
}

pub(crate) struct Model<'a> {
    pub net: Network<'a>,
    pub graph: &'a Graph,
    pub origin: NodeIdx,
    pub destination: NodeIdx,
    pub vehicles: Vec<VehicleSlot>,
    pub vehicle_ids: Vec<&'a str>,
    walk_ok: bool,
    pt_ok: bool,
    board: Micros,
    start: State,
    start_step: Option<Step>,
}

impl<'a> Model<'a> {
    /// The request must already be validated against the graph.
    pub fn new(net: Network<'a>, request: &'a RoutingRequest) -> Self {
        let allowed = request.allowed_modes;
        let vehicles: Vec<VehicleSlot> = request
            .vehicles
            .iter()
            .map(|v| VehicleSlot {
                leg_mode: v.mode(),
                network_mode: v.usage.network_mode,
                park_as: v.usage.park_as,
                dims: v.usage.enforce_dimensions.then_some(v.dimensions),
                location: v.location,
                usable: allowed.contains(v.mode()),
                implicit_parking: request.implicit_destination_parking.contains(&v.kind),
                pickup: request.switch_costs.pickup(v.kind),
                park: request.switch_costs.park(v.kind),
            })
            .collect();
        let start_vehicle = request
            .start_riding
            .as_ref()
            .and_then(|id| request.vehicles.iter().position(|v| &v.id == id))
            .map(|i| i as u8);
        let (start, start_step) = match start_vehicle {
            Some(v) => (
                State {
                    node: request.origin,
                    carrier: Carrier::Riding(v),
                    used: 0,
                },
                Some(Step::Pickup(v)),
            ),
            None => (
                State {
                    node: request.origin,
                    carrier: Carrier::OnFoot,
                    used: 0,
                },
                None,
            ),
        };
        Model {
            net,
            graph: net.graph(),
            origin: request.origin,
            destination: request.destination,
            vehicles,
            vehicle_ids: request.vehicles.iter().map(|v| v.id.as_str()).collect(),
            walk_ok: allowed.contains(Mode::Walk),
            pt_ok: allowed.contains(Mode::PublicTransport),
            board: request.switch_costs.board(),
            start,
            start_step,
        }
    }

    /// Initial state and the forced step leading into it, if any.
    pub fn start(&self) -> (State, Option<Step>) {
        (self.start, self.start_step)
    }

    pub fn vehicle_count(&self) -> usize {
        self.vehicles.len()
    }

    fn can_park(&self, v: &VehicleSlot, node: NodeIdx) -> bool {
        self.graph
            .parking_at(node)
            .is_some_and(|p| p.admits(v.park_as, v.dims.as_ref()))
    }

    /// Calls `emit` for every transition out of `s`.
    pub fn for_each_transition(&self, s: &State, mut emit: impl FnMut(Step, State)) {
        let graph = self.graph;
        match s.carrier {
            Carrier::OnFoot => {
                if self.walk_ok {
                    for &e in graph.out_edges(s.node) {
                        if graph.edge(e).allows(Mode::Walk) {
                            emit(
                                Step::Edge {
                                    edge: e,
                                    network: Mode::Walk,
                                    leg: Mode::Walk,
                                },
                                State {
                                    node: graph.edge(e).to,
                                    ..*s
                                },
                            );
                        }
                    }
                }
                if self.pt_ok {
                    for &line in graph.lines_at(s.node) {
                        let departs = graph
                            .out_edges(s.node)
                            .iter()
                            .any(|&e| graph.edge(e).transit_line == Some(line));
                        if departs {
                            emit(
                                Step::Board(line),
                                State {
                                    carrier: Carrier::OnTransit(line),
                                    ..*s
                                },
                            );
                        }
                    }
                }
                if self.walk_ok || s.node == self.origin {
                    for (i, v) in self.vehicles.iter().enumerate() {
                        if v.usable && v.location == s.node && s.used & (1 << i) == 0 {
                            emit(
                                Step::Pickup(i as u8),
                                State {
                                    carrier: Carrier::Riding(i as u8),
                                    ..*s
                                },
                            );
                        }
                    }
                }
            }
            Carrier::Riding(i) => {
                let v = &self.vehicles[i as usize];
                for &e in graph.out_edges(s.node) {
                    let edge = graph.edge(e);
                    if !edge.allows(v.network_mode) {
                        continue;
                    }
                    if let Some(dims) = &v.dims {
                        if !edge.restrictions.admits(dims) {
                            continue;
                        }
                    }
                    emit(
                        Step::Edge {
                            edge: e,
                            network: v.network_mode,
                            leg: v.leg_mode,
                        },
                        State { node: edge.to, ..*s },
                    );
                }
                if (self.walk_ok || s.node == self.destination) && self.can_park(v, s.node) {
                    emit(
                        Step::Drop(i),
                        State {
                            node: s.node,
                            carrier: Carrier::OnFoot,
                            used: s.used | (1 << i),
                        },
                    );
                }
            }
            Carrier::OnTransit(line) => {
                for &e in graph.out_edges(s.node) {
                    let edge = graph.edge(e);
                    if edge.transit_line == Some(line) {
                        emit(
                            Step::Edge {
                                edge: e,
                                network: Mode::PublicTransport,
                                leg: Mode::PublicTransport,
                            },
                            State { node: edge.to, ..*s },
                        );
                    }
                }
                emit(
                    Step::Alight,
                    State {
                        carrier: Carrier::OnFoot,
                        ..*s
                    },
                );
            }
        }
    }

    /// The step that ends the trip in `s`, if `s` is terminal.
    pub fn finish(&self, s: &State) -> Option<Step> {
        if s.node != self.destination {
            return None;
        }
        match s.carrier {
            Carrier::OnFoot => Some(Step::Finish(None)),
            Carrier::Riding(i) if self.vehicles[i as usize].implicit_parking => Some(Step::Finish(Some(i))),
            _ => None,
        }
    }

    pub fn cost(&self, step: &Step) -> StepCost {
        match *step {
            Step::Edge { edge, network, leg } => {
                let e = self.graph.edge(edge);
                let speed = self
                    .net
                    .speed(edge, network)
                    .expect("transitions only use allowed modes");
                StepCost {
                    time: travel_time(e.length_m, speed),
                    mode: leg,
                    distance_mm: e.length_mm(),
                }
            }
            Step::Board(line) => StepCost {
                time: Micros::from_secs(self.graph.line(line).headway_s / 2.0) + self.board,
                mode: Mode::PublicTransport,
                distance_mm: 0,
            },
            Step::Alight => StepCost {
                time: Micros::ZERO,
                mode: Mode::PublicTransport,
                distance_mm: 0,
            },
            Step::Pickup(i) => {
                let v = &self.vehicles[i as usize];
                StepCost {
                    time: v.pickup,
                    mode: v.leg_mode,
                    distance_mm: 0,
                }
            }
            Step::Drop(i) | Step::Finish(Some(i)) => {
                let v = &self.vehicles[i as usize];
                StepCost {
                    time: v.park,
                    mode: v.leg_mode,
                    distance_mm: 0,
                }
            }
            Step::Finish(None) => StepCost {
                time: Micros::ZERO,
                mode: Mode::Walk,
                distance_mm: 0,
            },
        }
    }
}
