//! Response documents and their canonical text form.

use chrono::{DateTime, FixedOffset};
use serde_json::{json, Map, Value};

use intermodal_core::{AlternativeSet, Graph, MotorhomeOption, ProfileFamily, Route};

/// Pretty-printed JSON with sorted keys and every float written with
/// exactly three decimals, so identical results give identical bytes.
pub fn canonical(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    match value {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&value.to_string()),
        Value::Number(n) => match n.as_f64().filter(|_| n.is_f64()) {
            Some(f) => {
                let s = format!("{f:.3}");
                out.push_str(if s == "-0.000" { "0.000" } else { &s });
            }
            None => out.push_str(&n.to_string()),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*key], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

pub fn route(graph: &Graph, route: &Route) -> Map<String, Value> {
    let legs: Vec<Value> = route
        .legs
        .iter()
        .map(|leg| {
            let mut doc = json!({
                "mode": leg.mode.as_str(),
                "nodes": leg.nodes.iter().map(|&n| graph.node_id(n)).collect::<Vec<_>>(),
                "distance_m": leg.distance_m(),
                "in_motion_s": leg.in_motion.as_secs_f64(),
                "transfer_s": leg.transfer.as_secs_f64(),
            });
            if let Some(line) = leg.line {
                doc["line"] = json!(graph.line(line).id);
            }
            doc
        })
        .collect();
    let mut map = Map::new();
    map.insert("legs".into(), Value::Array(legs));
    map.insert(
        "totals".into(),
        json!({
            "duration_s": route.total_duration.as_secs_f64(),
            "distance_m": route.total_distance_m(),
            "perceived_cost": route.perceived_cost.as_secs_f64(),
            "profile_id": route.profile_id,
        }),
    );
    map
}

fn with_departure(mut doc: Value, departure: Option<DateTime<FixedOffset>>) -> Value {
    if let Some(t) = departure {
        doc["departure_time"] = json!(t.to_rfc3339());
    }
    doc
}

pub fn alternatives(graph: &Graph, set: &AlternativeSet, departure: Option<DateTime<FixedOffset>>) -> Value {
    let alternatives: Vec<Value> = set
        .alternatives
        .iter()
        .map(|alt| {
            let mut doc = route(graph, &alt.route);
            let breakdown: Map<String, Value> = alt
                .breakdown
                .iter()
                .map(|(mode, (time, mm))| {
                    (
                        mode.as_str().to_string(),
                        json!({"duration_s": time.as_secs_f64(), "distance_m": *mm as f64 / 1000.0}),
                    )
                })
                .collect();
            doc.insert("mode_changes".into(), json!(alt.mode_changes));
            doc.insert("breakdown".into(), Value::Object(breakdown));
            doc.insert("neutral_cost".into(), json!(alt.neutral_cost.as_secs_f64()));
            doc.insert("plausibility_warning".into(), json!(alt.route.plausibility_warning));
            Value::Object(doc)
        })
        .collect();
    with_departure(json!({ "alternatives": alternatives }), departure)
}

pub fn motorhome_options(
    graph: &Graph,
    options: &[MotorhomeOption],
    departure: Option<DateTime<FixedOffset>>,
) -> Value {
    let options: Vec<Value> = options
        .iter()
        .map(|o| {
            let mut doc = route(graph, &o.route);
            doc.insert("label".into(), json!(o.label.as_str()));
            doc.insert("parking_node".into(), json!(graph.node_id(o.parking_node)));
            doc.insert("risk_flag".into(), json!(o.risk_flag));
            Value::Object(doc)
        })
        .collect();
    with_departure(json!({ "options": options }), departure)
}

pub fn profiles(family: &ProfileFamily) -> Value {
    let profiles: Vec<Value> = family
        .profiles()
        .iter()
        .map(|p| {
            let multipliers: Map<String, Value> = p
                .to_map()
                .into_iter()
                .map(|(m, v)| (m.as_str().to_string(), json!(v)))
                .collect();
            json!({"id": p.id(), "multipliers": multipliers})
        })
        .collect();
    json!({ "profiles": profiles })
}
