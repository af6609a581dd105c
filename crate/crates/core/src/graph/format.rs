//! On-disk JSON graph format.
//!
//! ```json
//! {
//!   "meta": {"name": "demo"},
//!   "nodes": [{"id": "A", "lat": 48.2, "lon": 16.37}],
//!   "edges": [{"from": "A", "to": "B", "length_m": 300, "allowed": {"walk": 5}}],
//!   "transit_lines": [{"id": "U1", "headway_s": 300}],
//!   "parking": [{"node": "B", "accepts": ["bike"]}]
//! }
//! ```
//!
//! Unknown keys are rejected. Validation runs in document order (nodes,
//! transit lines, edges, parking) and stops at the first problem, so the
//! same document always reports the same error.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Edge, Graph, LineIdx, Mode, Node, NodeIdx, ParkingFacility, Restrictions, TransitLine, VehicleKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    #[serde(default)]
    pub meta: MetaDoc,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    #[serde(default)]
    pub transit_lines: Vec<TransitLineDoc>,
    #[serde(default)]
    pub parking: Vec<ParkingDoc>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaDoc {
    #[serde(default)]
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: String,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub length_m: f64,
    pub allowed: BTreeMap<Mode, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transit_line: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_width_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_length_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_height_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_weight_kg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitLineDoc {
    pub id: String,
    pub headway_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParkingDoc {
    pub node: String,
    pub accepts: Vec<VehicleKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity_width_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity_length_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("duplicate {entity} id {id:?}")]
    DuplicateId { entity: &'static str, id: String },
    #[error("{entity} references unknown node {node:?}")]
    DanglingNode { entity: String, node: String },
    #[error("{entity} references unknown transit line {line:?}")]
    UnknownLine { entity: String, line: String },
    #[error("{entity}: {reason}")]
    Invalid { entity: String, reason: String },
}

impl GraphError {
    fn invalid(entity: impl Into<String>, reason: impl Into<String>) -> Self {
        GraphError::Invalid {
            entity: entity.into(),
            reason: reason.into(),
        }
    }
}

/// Parses and validates a graph document.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| GraphError::Malformed(e.to_string()))?;
    Graph::from_document(doc)
}

fn positive(entity: &str, field: &str, value: f64) -> Result<(), GraphError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(GraphError::invalid(
            entity,
            format!("{field} must be positive, got {value}"),
        ))
    }
}

fn optional_positive(entity: &str, field: &str, value: Option<f64>) -> Result<(), GraphError> {
    value.map_or(Ok(()), |v| positive(entity, field, v))
}

impl Graph {
    pub fn from_document(doc: GraphDocument) -> Result<Graph, GraphError> {
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        let mut node_index: HashMap<&str, NodeIdx> = HashMap::with_capacity(doc.nodes.len());
        for (i, n) in doc.nodes.iter().enumerate() {
            let entity = format!("node {:?}", n.id);
            if n.id.is_empty() {
                return Err(GraphError::invalid(format!("node[{i}]"), "empty id"));
            }
            if !(n.lat.is_finite() && (-90.0..=90.0).contains(&n.lat)) {
                return Err(GraphError::invalid(entity, format!("latitude {} out of range", n.lat)));
            }
            if !(n.lon.is_finite() && (-180.0..=180.0).contains(&n.lon)) {
                return Err(GraphError::invalid(entity, format!("longitude {} out of range", n.lon)));
            }
            if node_index.insert(&n.id, NodeIdx(i as u32)).is_some() {
                return Err(GraphError::DuplicateId {
                    entity: "node",
                    id: n.id.clone(),
                });
            }
            nodes.push(Node {
                id: n.id.clone(),
                lat: n.lat,
                lon: n.lon,
            });
        }

        let mut lines = Vec::with_capacity(doc.transit_lines.len());
        let mut line_index: HashMap<&str, LineIdx> = HashMap::new();
        for (i, l) in doc.transit_lines.iter().enumerate() {
            let entity = format!("transit line {:?}", l.id);
            positive(&entity, "headway_s", l.headway_s)?;
            if line_index.insert(&l.id, LineIdx(i as u32)).is_some() {
                return Err(GraphError::DuplicateId {
                    entity: "transit line",
                    id: l.id.clone(),
                });
            }
            lines.push(TransitLine {
                id: l.id.clone(),
                headway_s: l.headway_s,
            });
        }

        let mut edges = Vec::with_capacity(doc.edges.len());
        for (i, e) in doc.edges.iter().enumerate() {
            let entity = format!("edge[{i}] {:?}->{:?}", e.from, e.to);
            let lookup = |id: &str| {
                node_index.get(id).copied().ok_or_else(|| GraphError::DanglingNode {
                    entity: entity.clone(),
                    node: id.to_string(),
                })
            };
            let from = lookup(&e.from)?;
            let to = lookup(&e.to)?;
            if from == to {
                return Err(GraphError::invalid(entity, "self-loop"));
            }
            positive(&entity, "length_m", e.length_m)?;
            if e.allowed.is_empty() {
                return Err(GraphError::invalid(entity, "no allowed modes"));
            }
            let mut speeds = [None; 5];
            for (&mode, &speed) in &e.allowed {
                positive(&entity, &format!("speed for {mode}"), speed)?;
                speeds[mode.index()] = Some(speed);
            }
            let transit = e.allowed.contains_key(&Mode::PublicTransport);
            let transit_line = match (&e.transit_line, transit) {
                (Some(line), true) => {
                    if e.allowed.len() > 1 {
                        return Err(GraphError::invalid(entity, "transit edge may allow only pt"));
                    }
                    Some(
                        line_index
                            .get(line.as_str())
                            .copied()
                            .ok_or_else(|| GraphError::UnknownLine {
                                entity: entity.clone(),
                                line: line.clone(),
                            })?,
                    )
                }
                (None, true) => {
                    return Err(GraphError::invalid(entity, "pt edge without transit_line"));
                }
                (Some(_), false) => {
                    return Err(GraphError::invalid(
                        entity,
                        "transit_line on an edge that does not allow pt",
                    ));
                }
                (None, false) => None,
            };
            optional_positive(&entity, "max_width_m", e.max_width_m)?;
            optional_positive(&entity, "max_length_m", e.max_length_m)?;
            optional_positive(&entity, "max_height_m", e.max_height_m)?;
            optional_positive(&entity, "max_weight_kg", e.max_weight_kg)?;
            edges.push(Edge {
                from,
                to,
                length_m: e.length_m,
                speeds,
                transit_line,
                restrictions: Restrictions {
                    max_width_m: e.max_width_m,
                    max_length_m: e.max_length_m,
                    max_height_m: e.max_height_m,
                    max_weight_kg: e.max_weight_kg,
                },
            });
        }

        let mut parking = Vec::with_capacity(doc.parking.len());
        let mut parked_nodes = HashSet::new();
        for (i, p) in doc.parking.iter().enumerate() {
            let entity = format!("parking[{i}] at {:?}", p.node);
            let node = node_index
                .get(p.node.as_str())
                .copied()
                .ok_or_else(|| GraphError::DanglingNode {
                    entity: entity.clone(),
                    node: p.node.clone(),
                })?;
            if !parked_nodes.insert(node) {
                return Err(GraphError::DuplicateId {
                    entity: "parking facility",
                    id: p.node.clone(),
                });
            }
            if p.accepts.is_empty() {
                return Err(GraphError::invalid(entity, "accepts no vehicle kind"));
            }
            optional_positive(&entity, "capacity_width_m", p.capacity_width_m)?;
            optional_positive(&entity, "capacity_length_m", p.capacity_length_m)?;
            let mut accepts = p.accepts.clone();
            accepts.sort();
            accepts.dedup();
            parking.push(ParkingFacility {
                node,
                accepts,
                capacity_width_m: p.capacity_width_m,
                capacity_length_m: p.capacity_length_m,
            });
        }

        Ok(Graph::assemble(doc.meta.name, nodes, edges, lines, parking))
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            meta: MetaDoc {
                name: self.meta.name.clone(),
            },
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    lat: n.lat,
                    lon: n.lon,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: self.node_id(e.from).to_string(),
                    to: self.node_id(e.to).to_string(),
                    length_m: e.length_m,
                    allowed: Mode::ALL
                        .into_iter()
                        .filter_map(|m| e.speed(m).map(|s| (m, s)))
                        .collect(),
                    transit_line: e.transit_line.map(|l| self.line(l).id.clone()),
                    max_width_m: e.restrictions.max_width_m,
                    max_length_m: e.restrictions.max_length_m,
                    max_height_m: e.restrictions.max_height_m,
                    max_weight_kg: e.restrictions.max_weight_kg,
                })
                .collect(),
            transit_lines: self
                .lines
                .iter()
                .map(|l| TransitLineDoc {
                    id: l.id.clone(),
                    headway_s: l.headway_s,
                })
                .collect(),
            parking: self
                .parking
                .iter()
                .map(|p| ParkingDoc {
                    node: self.node_id(p.node).to_string(),
                    accepts: p.accepts.clone(),
                    capacity_width_m: p.capacity_width_m,
                    capacity_length_m: p.capacity_length_m,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("graph documents always serialize")
    }
}
