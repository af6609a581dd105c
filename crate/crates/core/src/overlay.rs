//! Real-time speed overrides layered over the static graph.

use std::collections::HashMap;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::graph::{EdgeIdx, Graph, Mode};

pub const MAX_SPEED_FACTOR: f64 = 10.0;

/// Scales the speed of `mode` on every edge `from -> to` until `expiry`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedOverride {
    pub from: String,
    pub to: String,
    pub mode: Mode,
    pub factor: f64,
    pub expiry: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OverrideError {
    #[error("override {index}: no edge {from:?}->{to:?}")]
    UnknownEdge { index: usize, from: String, to: String },
    #[error("override {index}: edge {from:?}->{to:?} does not allow {mode}")]
    ModeNotAllowed {
        index: usize,
        from: String,
        to: String,
        mode: Mode,
    },
    #[error("override {index}: factor {factor} outside (0, {MAX_SPEED_FACTOR}]")]
    Factor { index: usize, factor: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Factor {
    value: f64,
    expiry: DateTime<Utc>,
}

/// A validated set of overrides resolved to edge indices. Later entries for
/// the same edge and mode replace earlier ones.
#[derive(Debug, Clone, Default)]
pub struct OverrideSet {
    factors: HashMap<(EdgeIdx, Mode), Factor>,
    entries: Vec<SpeedOverride>,
}

impl OverrideSet {
    pub fn resolve(graph: &Graph, overrides: Vec<SpeedOverride>) -> Result<Self, OverrideError> {
        let mut factors = HashMap::new();
        for (index, o) in overrides.iter().enumerate() {
            if !(o.factor.is_finite() && o.factor > 0.0 && o.factor <= MAX_SPEED_FACTOR) {
                return Err(OverrideError::Factor {
                    index,
                    factor: o.factor,
                });
            }
            let unknown = || OverrideError::UnknownEdge {
                index,
                from: o.from.clone(),
                to: o.to.clone(),
            };
            let from = graph.node_idx(&o.from).ok_or_else(unknown)?;
            let to = graph.node_idx(&o.to).ok_or_else(unknown)?;
            let edges: Vec<EdgeIdx> = graph.edges_between(from, to).collect();
            if edges.is_empty() {
                return Err(unknown());
            }
            let mut matched = false;
            for e in edges {
                if graph.edge(e).allows(o.mode) {
                    matched = true;
                    factors.insert(
                        (e, o.mode),
                        Factor {
                            value: o.factor,
                            expiry: o.expiry,
                        },
                    );
                }
            }
            if !matched {
                return Err(OverrideError::ModeNotAllowed {
                    index,
                    from: o.from.clone(),
                    to: o.to.clone(),
                    mode: o.mode,
                });
            }
        }
        Ok(OverrideSet {
            factors,
            entries: overrides,
        })
    }

    pub fn entries(&self) -> &[SpeedOverride] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Overrides whose expiry lies after `now`.
    pub fn active_count(&self, now: DateTime<Utc>) -> usize {
        self.entries.iter().filter(|o| o.expiry > now).count()
    }

    fn factor(&self, edge: EdgeIdx, mode: Mode, now: DateTime<Utc>) -> Option<f64> {
        self.factors
            .get(&(edge, mode))
            .filter(|f| f.expiry > now)
            .map(|f| f.value)
    }
}

/// The graph as seen by one query: base speeds, optionally scaled by the
/// overrides active at a fixed instant.
#[derive(Debug, Clone, Copy)]
pub struct Network<'a> {
    graph: &'a Graph,
    overrides: Option<(&'a OverrideSet, DateTime<Utc>)>,
}

impl<'a> Network<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        Network { graph, overrides: None }
    }

    pub fn with_overrides(graph: &'a Graph, overrides: &'a OverrideSet, now: DateTime<Utc>) -> Self {
        let overrides = (!overrides.is_empty()).then_some((overrides, now));
        Network { graph, overrides }
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    /// Effective speed in km/h, `None` if the mode may not use the edge.
    pub fn speed(&self, edge: EdgeIdx, mode: Mode) -> Option<f64> {
        let base = self.graph.edge(edge).speed(mode)?;
        match self.overrides {
            Some((set, now)) => Some(base * set.factor(edge, mode, now).unwrap_or(1.0)),
            None => Some(base),
        }
    }
}

impl<'a> From<&'a Graph> for Network<'a> {
    fn from(graph: &'a Graph) -> Self {
        Network::new(graph)
    }
}
