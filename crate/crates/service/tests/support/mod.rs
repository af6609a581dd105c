#![allow(dead_code)]

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use intermodal_core::{Graph, ProfileFamily};
use intermodal_service::Service;

pub fn service(graph: Graph) -> (Service, Router) {
    let service = Service::new(graph, ProfileFamily::default());
    let app = intermodal_service::router(service.clone());
    (service, app)
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<&Value>) -> (StatusCode, Value) {
    let body = match body {
        Some(v) => Body::from(v.to_string()),
        None => Body::empty(),
    };
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body)
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let text = std::str::from_utf8(&bytes).unwrap();
    assert!(text.ends_with('\n'), "responses end with a newline");
    (status, serde_json::from_str(text).unwrap())
}

/// Car-only trip over the car hop fixture.
pub fn car_hop_request() -> Value {
    json!({
        "origin": {"node": "A"},
        "destination": {"node": "B"},
        "allowed_modes": ["car"],
        "vehicles": [{"kind": "car", "location": {"node": "A"}}],
        "switch_costs": {"board_s": 0, "pickup_s": {"car": 0}, "park_s": {"car": 0}}
    })
}

pub fn halve(from: &str, to: &str, mode: &str, expiry: &str) -> Value {
    json!({"from": from, "to": to, "mode": mode, "factor": 0.5, "expiry": expiry})
}

pub fn in_hours(h: i64) -> String {
    (chrono::Utc::now() + chrono::Duration::hours(h)).to_rfc3339()
}

pub fn car_seconds(response: &Value) -> f64 {
    let legs = response["alternatives"][0]["legs"].as_array().unwrap();
    legs.iter()
        .filter(|l| l["mode"] == "car")
        .map(|l| l["in_motion_s"].as_f64().unwrap())
        .sum()
}

pub fn modes(route: &Value) -> Vec<String> {
    route["legs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["mode"].as_str().unwrap().to_string())
        .collect()
}
