//! JSON front end for the intermodal planner: request parsing, canonical
//! responses, an HTTP service with live speed overrides, and the CLI.

pub mod cli;
pub mod error;
pub mod render;
pub mod server;
pub mod wire;

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use intermodal_core::{generate_alternatives, three_option_routes, Graph, Network, ProfileFamily};

pub use error::{ApiError, ErrorKind};
pub use server::{router, Service};

fn read(path: &Path) -> Result<String, ApiError> {
    std::fs::read_to_string(path).map_err(|e| ApiError::new(ErrorKind::Io, format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<Graph, ApiError> {
    let text = read(path)?;
    intermodal_core::parse_graph(&text)
        .map_err(|e| ApiError::new(ErrorKind::InvalidGraph, format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    profiles: Vec<wire::ProfileDoc>,
}

/// Reads a profile family in the shape served by `GET /profiles`.
pub fn load_family(path: &Path) -> Result<ProfileFamily, ApiError> {
    let text = read(path)?;
    let doc: FamilyDoc = wire::parse(&text)?;
    wire::family(&doc.profiles, Some("profiles"))
}

/// Plans alternatives for a JSON route request.
pub fn plan_route(net: Network<'_>, request: &str, default_family: &ProfileFamily) -> Result<Value, ApiError> {
    let doc: wire::RouteRequestDoc = wire::parse(request)?;
    let graph = net.graph();
    let req = doc.to_request(graph)?;
    let custom;
    let family = match &doc.profile_family {
        Some(profiles) => {
            custom = wire::family(profiles, Some("profile_family"))?;
            &custom
        }
        None => default_family,
    };
    let set = generate_alternatives(net, &req, family)?;
    Ok(render::alternatives(graph, &set, req.departure_time))
}

/// Plans the motorhome options for a JSON motorhome request.
pub fn plan_motorhome(net: Network<'_>, request: &str) -> Result<Value, ApiError> {
    let doc: wire::MotorhomeRequestDoc = wire::parse(request)?;
    let graph = net.graph();
    let (req, profile) = doc.to_request(graph)?;
    let options = three_option_routes(net, &req, &profile)?;
    Ok(render::motorhome_options(graph, &options, req.base.departure_time))
}

pub fn graph_summary(graph: &Graph) -> Value {
    json!({
        "name": graph.meta().name,
        "nodes": graph.node_count(),
        "edges": graph.edge_count(),
        "transit_lines": graph.lines().len(),
        "parking": graph.parking().len(),
    })
}
