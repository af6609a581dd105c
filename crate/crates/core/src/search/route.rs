use std::collections::BTreeMap;

use crate::graph::{EdgeIdx, Graph, LineIdx, Mode, NodeIdx};
use crate::profile::MultiplierProfile;
use crate::units::{Micros, PerceivedCost};

use super::model::{Model, Step};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouteLeg {
    pub mode: Mode,
    /// Visited nodes, starting where the leg begins. A leg that only waits
    /// or switches vehicles has a single node.
    pub nodes: Vec<NodeIdx>,
    pub edges: Vec<EdgeIdx>,
    pub distance_mm: u64,
    pub in_motion: Micros,
    /// Boarding wait, vehicle pickup and parking attributed to this leg.
    pub transfer: Micros,
    pub line: Option<LineIdx>,
    /// Id of the owned vehicle ridden on this leg.
    pub vehicle: Option<String>,
}

impl RouteLeg {
    fn open(mode: Mode, at: NodeIdx) -> Self {
        RouteLeg {
            mode,
            nodes: vec![at],
            edges: Vec::new(),
            distance_mm: 0,
            in_motion: Micros::ZERO,
            transfer: Micros::ZERO,
            line: None,
            vehicle: None,
        }
    }

    pub fn start(&self) -> NodeIdx {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeIdx {
        *self.nodes.last().expect("legs have at least one node")
    }

    pub fn duration(&self) -> Micros {
        self.in_motion + self.transfer
    }

    pub fn distance_m(&self) -> f64 {
        self.distance_mm as f64 / 1000.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub legs: Vec<RouteLeg>,
    pub total_duration: Micros,
    pub total_distance_mm: u64,
    pub perceived_cost: PerceivedCost,
    /// Profile the perceived cost was computed under.
    pub profile_id: String,
    /// Set when the route survived plausibility filtering only because it
    /// was the last one left.
    pub plausibility_warning: bool,
}

impl Route {
    /// The route of a trip that starts at its destination.
    pub fn empty(profile_id: &str) -> Self {
        Route {
            legs: Vec::new(),
            total_duration: Micros::ZERO,
            total_distance_mm: 0,
            perceived_cost: PerceivedCost::ZERO,
            profile_id: profile_id.to_string(),
            plausibility_warning: false,
        }
    }

    pub fn total_distance_m(&self) -> f64 {
        self.total_distance_mm as f64 / 1000.0
    }

    pub fn modes(&self) -> Vec<Mode> {
        self.legs.iter().map(|l| l.mode).collect()
    }

    /// Every visited node in order, shared leg endpoints listed once.
    pub fn node_path(&self) -> Vec<NodeIdx> {
        let mut path: Vec<NodeIdx> = Vec::new();
        for leg in &self.legs {
            for &n in &leg.nodes {
                if path.last() != Some(&n) {
                    path.push(n);
                }
            }
        }
        path
    }

    pub fn node_ids<'g>(&self, graph: &'g Graph) -> Vec<&'g str> {
        self.node_path().into_iter().map(|n| graph.node_id(n)).collect()
    }

    /// Adjacent legs in different modes.
    pub fn mode_changes(&self) -> usize {
        self.legs.windows(2).filter(|w| w[0].mode != w[1].mode).count()
    }

    pub fn is_single_mode(&self) -> bool {
        self.legs.windows(2).all(|w| w[0].mode == w[1].mode)
    }

    /// Perceived cost of the same legs under another profile.
    pub fn perceived_under(&self, profile: &MultiplierProfile) -> PerceivedCost {
        self.legs
            .iter()
            .map(|l| PerceivedCost::weigh(l.duration(), profile.milli(l.mode)))
            .fold(PerceivedCost::ZERO, |a, b| a + b)
    }

    /// Copy re-priced under `profile`.
    pub fn repriced(&self, profile: &MultiplierProfile) -> Route {
        Route {
            perceived_cost: self.perceived_under(profile),
            profile_id: profile.id().to_string(),
            ..self.clone()
        }
    }

    /// Time and distance spent per mode.
    pub fn mode_breakdown(&self) -> BTreeMap<Mode, (Micros, u64)> {
        let mut out: BTreeMap<Mode, (Micros, u64)> = BTreeMap::new();
        for leg in &self.legs {
            let entry = out.entry(leg.mode).or_default();
            entry.0 += leg.duration();
            entry.1 += leg.distance_mm;
        }
        out
    }
}

/// Turns a step sequence starting at the origin into legs and totals.
pub(crate) fn build_route(model: &Model<'_>, steps: &[Step], profile: &MultiplierProfile) -> Route {
    let graph = model.graph;
    let mut legs = Vec::new();
    let mut current: Option<RouteLeg> = None;
    let mut at = model.origin;
    let mut perceived = PerceivedCost::ZERO;

    for step in steps {
        let cost = model.cost(step);
        perceived += PerceivedCost::weigh(cost.time, profile.milli(cost.mode));
        match *step {
            Step::Edge { edge, leg, .. } => {
                let l = current.get_or_insert_with(|| RouteLeg::open(leg, at));
                debug_assert_eq!(l.mode, leg);
                at = graph.edge(edge).to;
                l.nodes.push(at);
                l.edges.push(edge);
                l.distance_mm += cost.distance_mm;
                l.in_motion += cost.time;
            }
            Step::Board(line) => {
                legs.extend(current.take());
                let mut l = RouteLeg::open(Mode::PublicTransport, at);
                l.line = Some(line);
                l.transfer = cost.time;
                current = Some(l);
            }
            Step::Pickup(i) => {
                legs.extend(current.take());
                let mut l = RouteLeg::open(model.vehicles[i as usize].leg_mode, at);
                l.vehicle = Some(model.vehicle_ids[i as usize].to_string());
                l.transfer = cost.time;
                current = Some(l);
            }
            Step::Drop(_) | Step::Finish(Some(_)) => {
                let mut l = current.take().expect("parking ends a riding leg");
                l.transfer += cost.time;
                legs.push(l);
            }
            Step::Alight | Step::Finish(None) => legs.extend(current.take()),
        }
    }
    legs.extend(current);

    let total_duration = legs.iter().map(RouteLeg::duration).sum();
    let total_distance_mm = legs.iter().map(|l| l.distance_mm).sum();
    Route {
        legs,
        total_duration,
        total_distance_mm,
        perceived_cost: perceived,
        profile_id: profile.id().to_string(),
        plausibility_warning: false,
    }
}
