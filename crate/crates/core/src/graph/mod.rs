//! Mode-annotated network: one graph of roads, paths and transit links where
//! every edge lists the modes allowed to traverse it together with a speed
//! per mode. Layers for the individual modes are never materialized; the
//! search derives them from the annotations.

mod format;
mod snap;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use format::{parse_graph, EdgeDoc, GraphDocument, GraphError, MetaDoc, NodeDoc, ParkingDoc, TransitLineDoc};
pub use snap::{haversine_m, snap, SnapError, SNAP_RADIUS_M};

/// Transport modes known to the planner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "walk")]
    Walk,
    #[serde(rename = "bike")]
    Bike,
    #[serde(rename = "car")]
    Car,
    #[serde(rename = "motorhome")]
    Motorhome,
    #[serde(rename = "pt")]
    PublicTransport,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Walk,
        Mode::Bike,
        Mode::Car,
        Mode::Motorhome,
        Mode::PublicTransport,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn as_str(self) -> &'static str {
        match self {
            Mode::Walk => "walk",
            Mode::Bike => "bike",
            Mode::Car => "car",
            Mode::Motorhome => "motorhome",
            Mode::PublicTransport => "pt",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A small set of modes.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ModeSet(u8);

impl ModeSet {
    pub const EMPTY: ModeSet = ModeSet(0);
    pub const ALL: ModeSet = ModeSet(0b1_1111);

    pub fn contains(self, mode: Mode) -> bool {
        self.0 & (1 << mode.index()) != 0
    }

    pub fn insert(&mut self, mode: Mode) {
        self.0 |= 1 << mode.index();
    }

    pub fn remove(&mut self, mode: Mode) {
        self.0 &= !(1 << mode.index());
    }

    pub fn with(mut self, mode: Mode) -> Self {
        self.insert(mode);
        self
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: ModeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ModeSet) -> ModeSet {
        ModeSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = Mode> {
        Mode::ALL.into_iter().filter(move |m| self.contains(*m))
    }
}

impl FromIterator<Mode> for ModeSet {
    fn from_iter<I: IntoIterator<Item = Mode>>(iter: I) -> Self {
        let mut set = ModeSet::EMPTY;
        for mode in iter {
            set.insert(mode);
        }
        set
    }
}

/// Physical size of a vehicle, checked against edge restrictions and
/// parking capacities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimensions {
    pub width_m: f64,
    pub length_m: f64,
    pub height_m: f64,
    pub weight_kg: f64,
}

/// Kinds of privately owned vehicles a traveler can bring into a trip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VehicleKind {
    #[serde(rename = "bike")]
    Bike,
    #[serde(rename = "car")]
    Car,
    #[serde(rename = "motorhome")]
    Motorhome,
}

impl VehicleKind {
    pub const ALL: [VehicleKind; 3] = [VehicleKind::Bike, VehicleKind::Car, VehicleKind::Motorhome];

    pub const fn index(self) -> usize {
        self as usize
    }

    /// The mode a traveler is in while riding this vehicle.
    pub const fn mode(self) -> Mode {
        match self {
            VehicleKind::Bike => Mode::Bike,
            VehicleKind::Car => Mode::Car,
            VehicleKind::Motorhome => Mode::Motorhome,
        }
    }

    pub const fn default_dimensions(self) -> Dimensions {
        match self {
            VehicleKind::Bike => Dimensions {
                width_m: 0.7,
                length_m: 1.9,
                height_m: 1.2,
                weight_kg: 20.0,
            },
            VehicleKind::Car => Dimensions {
                width_m: 1.8,
                length_m: 4.5,
                height_m: 1.5,
                weight_kg: 1500.0,
            },
            VehicleKind::Motorhome => Dimensions {
                width_m: 2.3,
                length_m: 7.2,
                height_m: 3.1,
                weight_kg: 3500.0,
            },
        }
    }

    pub const fn as_str(self) -> &'static str {
        match self {
            VehicleKind::Bike => "bike",
            VehicleKind::Car => "car",
            VehicleKind::Motorhome => "motorhome",
        }
    }
}

impl fmt::Display for VehicleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeIdx(pub u32);

impl NodeIdx {
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeIdx(pub u32);

impl EdgeIdx {
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineIdx(pub u32);

impl LineIdx {
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub lat: f64,
    pub lon: f64,
}

/// Optional physical restrictions on an edge. `None` means unrestricted.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Restrictions {
    pub max_width_m: Option<f64>,
    pub max_length_m: Option<f64>,
    pub max_height_m: Option<f64>,
    pub max_weight_kg: Option<f64>,
}

impl Restrictions {
    pub fn admits(&self, dims: &Dimensions) -> bool {
        fn ok(limit: Option<f64>, value: f64) -> bool {
            limit.is_none_or(|l| value <= l)
        }
        ok(self.max_width_m, dims.width_m)
            && ok(self.max_length_m, dims.length_m)
            && ok(self.max_height_m, dims.height_m)
            && ok(self.max_weight_kg, dims.weight_kg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: NodeIdx,
    pub to: NodeIdx,
    pub length_m: f64,
    /// Speed in km/h per mode; `None` where the mode may not use the edge.
    pub speeds: [Option<f64>; 5],
    pub transit_line: Option<LineIdx>,
    pub restrictions: Restrictions,
}

impl Edge {
    pub fn speed(&self, mode: Mode) -> Option<f64> {
        self.speeds[mode.index()]
    }

    pub fn allows(&self, mode: Mode) -> bool {
        self.speeds[mode.index()].is_some()
    }

    pub fn allowed_modes(&self) -> ModeSet {
        Mode::ALL.into_iter().filter(|m| self.allows(*m)).collect()
    }

    /// Length rounded to whole millimetres, the unit distances are summed in.
    pub fn length_mm(&self) -> u64 {
        (self.length_m * 1000.0).round() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitLine {
    pub id: String,
    pub headway_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParkingFacility {
    pub node: NodeIdx,
    pub accepts: Vec<VehicleKind>,
    pub capacity_width_m: Option<f64>,
    pub capacity_length_m: Option<f64>,
}

impl ParkingFacility {
    pub fn accepts(&self, kind: VehicleKind) -> bool {
        self.accepts.contains(&kind)
    }

    /// Whether a vehicle of `kind` fits. `dims` of `None` skips the
    /// capacity check.
    pub fn admits(&self, kind: VehicleKind, dims: Option<&Dimensions>) -> bool {
        if !self.accepts(kind) {
            return false;
        }
        match dims {
            None => true,
            Some(d) => {
                self.capacity_width_m.is_none_or(|w| d.width_m <= w)
                    && self.capacity_length_m.is_none_or(|l| d.length_m <= l)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMeta {
    pub name: String,
    pub node_count: usize,
    pub edge_count: usize,
    pub line_count: usize,
    pub parking_count: usize,
}

/// Immutable routing network. Build with [`parse_graph`] or
/// [`Graph::from_document`].
#[derive(Debug, Clone)]
pub struct Graph {
    meta: GraphMeta,
    nodes: Vec<Node>,
    node_index: HashMap<String, NodeIdx>,
    /// Position of each node in id order, for lexicographic tie-breaks.
    node_rank: Vec<u32>,
    edges: Vec<Edge>,
    first_out: Vec<u32>,
    out_edges: Vec<EdgeIdx>,
    lines: Vec<TransitLine>,
    line_index: HashMap<String, LineIdx>,
    /// Sorted transit lines with an edge entering or leaving each node.
    first_line: Vec<u32>,
    node_lines: Vec<LineIdx>,
    parking: Vec<ParkingFacility>,
    parking_at: HashMap<NodeIdx, usize>,
}

impl Graph {
    pub fn meta(&self) -> &GraphMeta {
        &self.meta
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn lines(&self) -> &[TransitLine] {
        &self.lines
    }

    pub fn parking(&self) -> &[ParkingFacility] {
        &self.parking
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node(&self, idx: NodeIdx) -> &Node {
        &self.nodes[idx.index()]
    }

    pub fn node_id(&self, idx: NodeIdx) -> &str {
        &self.nodes[idx.index()].id
    }

    pub fn node_idx(&self, id: &str) -> Option<NodeIdx> {
        self.node_index.get(id).copied()
    }

    pub(crate) fn node_rank(&self, idx: NodeIdx) -> u32 {
        self.node_rank[idx.index()]
    }

    pub fn edge(&self, idx: EdgeIdx) -> &Edge {
        &self.edges[idx.index()]
    }

    pub fn line(&self, idx: LineIdx) -> &TransitLine {
        &self.lines[idx.index()]
    }

    pub fn line_idx(&self, id: &str) -> Option<LineIdx> {
        self.line_index.get(id).copied()
    }

    pub fn out_edges(&self, node: NodeIdx) -> &[EdgeIdx] {
        let start = self.first_out[node.index()] as usize;
        let end = self.first_out[node.index() + 1] as usize;
        &self.out_edges[start..end]
    }

    /// Transit lines serving `node`, sorted by index.
    pub fn lines_at(&self, node: NodeIdx) -> &[LineIdx] {
        let start = self.first_line[node.index()] as usize;
        let end = self.first_line[node.index() + 1] as usize;
        &self.node_lines[start..end]
    }

    pub fn parking_at(&self, node: NodeIdx) -> Option<&ParkingFacility> {
        self.parking_at.get(&node).map(|&i| &self.parking[i])
    }

    /// Edges leaving `from` and entering `to`.
    pub fn edges_between(&self, from: NodeIdx, to: NodeIdx) -> impl Iterator<Item = EdgeIdx> + '_ {
        self.out_edges(from)
            .iter()
            .copied()
            .filter(move |e| self.edges[e.index()].to == to)
    }

    /// Assembles a graph from already validated parts.
    fn assemble(
        name: String,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        lines: Vec<TransitLine>,
        parking: Vec<ParkingFacility>,
    ) -> Graph {
        let node_index: HashMap<String, NodeIdx> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.clone(), NodeIdx(i as u32)))
            .collect();
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| nodes[a].id.cmp(&nodes[b].id));
        let mut node_rank = vec![0u32; nodes.len()];
        for (rank, &i) in order.iter().enumerate() {
            node_rank[i] = rank as u32;
        }

        let n = nodes.len();
        let mut first_out = vec![0u32; n + 1];
        for e in &edges {
            first_out[e.from.index() + 1] += 1;
        }
        for i in 0..n {
            first_out[i + 1] += first_out[i];
        }
        let mut cursor = first_out.clone();
        let mut out_edges = vec![EdgeIdx(0); edges.len()];
        for (i, e) in edges.iter().enumerate() {
            let slot = &mut cursor[e.from.index()];
            out_edges[*slot as usize] = EdgeIdx(i as u32);
            *slot += 1;
        }

        let mut per_node: Vec<Vec<LineIdx>> = vec![Vec::new(); n];
        for e in &edges {
            if let Some(line) = e.transit_line {
                per_node[e.from.index()].push(line);
                per_node[e.to.index()].push(line);
            }
        }
        let mut first_line = Vec::with_capacity(n + 1);
        let mut node_lines = Vec::new();
        first_line.push(0u32);
        for mut list in per_node {
            list.sort();
            list.dedup();
            node_lines.extend(list);
            first_line.push(node_lines.len() as u32);
        }

        let line_index = lines
            .iter()
            .enumerate()
            .map(|(i, l)| (l.id.clone(), LineIdx(i as u32)))
            .collect();
        let parking_at = parking.iter().enumerate().map(|(i, p)| (p.node, i)).collect();

        Graph {
            meta: GraphMeta {
                name,
                node_count: nodes.len(),
                edge_count: edges.len(),
                line_count: lines.len(),
                parking_count: parking.len(),
            },
            nodes,
            node_index,
            node_rank,
            edges,
            first_out,
            out_edges,
            lines,
            line_index,
            first_line,
            node_lines,
            parking,
            parking_at,
        }
    }
}
