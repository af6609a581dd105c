//! HTTP endpoints. Each query reads one snapshot of the override set when it
//! is admitted; `PUT /overrides` publishes a new set without disturbing
//! queries already running.

use std::net::SocketAddr;
use std::sync::{Arc, RwLock};

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::Router;
use chrono::{DateTime, Utc};
use serde_json::{json, Value};

use intermodal_core::{Graph, Network, OverrideSet, ProfileFamily};

use crate::error::{ApiError, ErrorKind};
use crate::{render, wire};

struct Shared {
    graph: Arc<Graph>,
    family: ProfileFamily,
    overrides: RwLock<Arc<OverrideSet>>,
}

#[derive(Clone)]
pub struct Service {
    shared: Arc<Shared>,
}

/// The graph and the override set in force when a query was admitted.
pub struct Snapshot {
    pub graph: Arc<Graph>,
    pub overrides: Arc<OverrideSet>,
    pub now: DateTime<Utc>,
}

impl Snapshot {
    pub fn network(&self) -> Network<'_> {
        Network::with_overrides(&self.graph, &self.overrides, self.now)
    }
}

impl Service {
    pub fn new(graph: Graph, family: ProfileFamily) -> Self {
        Service {
            shared: Arc::new(Shared {
                graph: Arc::new(graph),
                family,
                overrides: RwLock::new(Arc::new(OverrideSet::default())),
            }),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.shared.graph
    }

    pub fn family(&self) -> &ProfileFamily {
        &self.shared.family
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            graph: self.shared.graph.clone(),
            overrides: self.shared.overrides.read().expect("override lock").clone(),
            now: Utc::now(),
        }
    }

    /// Validates `body` and replaces the whole override set with it.
    /// Returns the number of overrides active now.
    pub fn replace_overrides(&self, body: &str) -> Result<usize, ApiError> {
        let docs: Vec<wire::OverrideDoc> = wire::parse(body)?;
        let set =
            OverrideSet::resolve(&self.shared.graph, docs.iter().map(|d| d.to_override()).collect()).map_err(|e| {
                let field = match &e {
                    intermodal_core::overlay::OverrideError::UnknownEdge { index, .. }
                    | intermodal_core::overlay::OverrideError::ModeNotAllowed { index, .. } => format!("[{index}]"),
                    intermodal_core::overlay::OverrideError::Factor { index, .. } => format!("[{index}].factor"),
                };
                ApiError::invalid(Some(field), e.to_string())
            })?;
        let active = set.active_count(Utc::now());
        *self.shared.overrides.write().expect("override lock") = Arc::new(set);
        Ok(active)
    }

    pub fn health(&self) -> Value {
        let snapshot = self.snapshot();
        json!({
            "nodes": snapshot.graph.node_count(),
            "edges": snapshot.graph.edge_count(),
            "overrides": snapshot.overrides.active_count(snapshot.now),
        })
    }
}

fn json_response(status: StatusCode, value: &Value) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "application/json")],
        render::canonical(value),
    )
        .into_response()
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.kind {
            ErrorKind::InvalidRequest => StatusCode::BAD_REQUEST,
            ErrorKind::Unreachable => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorKind::Io | ErrorKind::InvalidGraph | ErrorKind::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        };
        json_response(status, &json!({ "error": self.to_json() }))
    }
}

/// Runs a search off the async executor against a fresh snapshot.
async fn compute(
    service: Service,
    body: String,
    plan: fn(&Service, Network<'_>, &str) -> Result<Value, ApiError>,
) -> Response {
    let snapshot = service.snapshot();
    let result = tokio::task::spawn_blocking(move || plan(&service, snapshot.network(), &body)).await;
    match result {
        Ok(Ok(value)) => json_response(StatusCode::OK, &value),
        Ok(Err(e)) => e.into_response(),
        Err(e) => ApiError::new(ErrorKind::Internal, e.to_string()).into_response(),
    }
}

async fn route(State(service): State<Service>, body: String) -> Response {
    compute(service, body, |s, net, body| crate::plan_route(net, body, s.family())).await
}

async fn motorhome(State(service): State<Service>, body: String) -> Response {
    compute(service, body, |_, net, body| crate::plan_motorhome(net, body)).await
}

async fn overrides(State(service): State<Service>, body: String) -> Response {
    match service.replace_overrides(&body) {
        Ok(active) => json_response(StatusCode::OK, &json!({ "overrides": active })),
        Err(e) => e.into_response(),
    }
}

async fn health(State(service): State<Service>) -> Response {
    json_response(StatusCode::OK, &service.health())
}

async fn profiles(State(service): State<Service>) -> Response {
    json_response(StatusCode::OK, &render::profiles(service.family()))
}

pub fn router(service: Service) -> Router {
    Router::new()
        .route("/route", post(route))
        .route("/motorhome", post(motorhome))
        .route("/overrides", put(overrides))
        .route("/health", get(health))
        .route("/profiles", get(profiles))
        .with_state(service)
}

pub async fn serve(service: Service, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(service)).await
}
