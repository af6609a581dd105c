use thiserror::Error;

use super::{Graph, NodeIdx};

/// Points farther than this from every node do not snap.
pub const SNAP_RADIUS_M: f64 = 500.0;

/// Mean Earth radius in metres.
const EARTH_RADIUS_M: f64 = 6_371_008.8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SnapError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("nearest node {nearest:?} is {distance_m:.1} m away (limit {SNAP_RADIUS_M} m)")]
    TooFar { nearest: String, distance_m: f64 },
}

/// Great-circle distance between two WGS84 points.
pub fn haversine_m(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let a = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * a.sqrt().min(1.0).asin()
}

/// Nearest node to a point; equal distances go to the smallest id.
pub fn snap(graph: &Graph, lat: f64, lon: f64) -> Result<NodeIdx, SnapError> {
    let mut best: Option<(f64, NodeIdx)> = None;
    for (i, node) in graph.nodes().iter().enumerate() {
        let idx = NodeIdx(i as u32);
        let d = haversine_m(lat, lon, node.lat, node.lon);
        let better = match best {
            None => true,
            Some((bd, bi)) => d < bd || (d == bd && node.id.as_str() < graph.node_id(bi)),
        };
        if better {
            best = Some((d, idx));
        }
    }
    let (distance_m, idx) = best.ok_or(SnapError::EmptyGraph)?;
    if distance_m > SNAP_RADIUS_M {
        return Err(SnapError::TooFar {
            nearest: graph.node_id(idx).to_string(),
            distance_m,
        });
    }
    Ok(idx)
}
