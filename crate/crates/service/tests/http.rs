mod support;

use axum::http::{Method, StatusCode};
use serde_json::json;

use intermodal_fixtures as fx;
use support::{call, car_hop_request, car_seconds, halve, in_hours, modes, service};

#[tokio::test]
async fn health_reports_graph_size_and_overrides() {
    let (_, app) = service(fx::single_walk_edge().graph);
    let (status, body) = call(&app, Method::GET, "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"nodes": 2, "edges": 1, "overrides": 0}));
}

#[tokio::test]
async fn unknown_mode_is_a_field_error() {
    let (_, app) = service(fx::single_walk_edge().graph);
    let request = json!({
        "origin": {"node": "A"},
        "destination": {"node": "B"},
        "allowed_modes": ["walk", "scooter"]
    });
    let (status, body) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["kind"], "invalid_request");
    assert_eq!(body["error"]["field"], "allowed_modes[1]");
    assert!(body["error"]["message"].as_str().unwrap().contains("scooter"));
}

#[tokio::test]
async fn request_errors_name_the_field() {
    let (_, app) = service(fx::single_walk_edge().graph);
    let cases = [
        (
            json!({"origin": {"node": "Q"}, "destination": {"node": "B"}}),
            "origin.node",
        ),
        (
            json!({"origin": {"node": "A"}, "destination": {"node": "B"}, "colour": 1}),
            ".",
        ),
        (
            json!({"origin": {"node": "A"}, "destination": {"node": "B"}, "objective": "scenic"}),
            "objective",
        ),
        (
            json!({"origin": {"node": "A"}, "destination": {"lat": 0.0, "lon": 0.0}}),
            "destination",
        ),
        (
            json!({"origin": {"node": "A"}, "destination": {"node": "B"}, "allowed_modes": []}),
            "allowed_modes",
        ),
        (
            json!({"origin": {"node": "A"}, "destination": {"node": "B"},
                   "profile_family": [{"id": "x", "multipliers": {"walk": 0.5}}]}),
            "profile_family[0]",
        ),
    ];
    for (request, field) in cases {
        let (status, body) = call(&app, Method::POST, "/route", Some(&request)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{request}");
        assert_eq!(body["error"]["kind"], "invalid_request");
        if field == "." {
            assert!(body["error"]["message"].as_str().unwrap().contains("colour"));
        } else {
            assert_eq!(body["error"]["field"], field, "{request}");
        }
    }
}

#[tokio::test]
async fn malformed_json_is_a_bad_request() {
    let (_, app) = service(fx::single_walk_edge().graph);
    let request = axum::http::Request::builder()
        .method(Method::POST)
        .uri("/route")
        .body(axum::body::Body::from("{\"origin\":"))
        .unwrap();
    let response = tower::ServiceExt::oneshot(app, request).await.unwrap();
    assert_eq!(response.status(), StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn unreachable_is_distinguished_from_bad_input() {
    let (_, app) = service(fx::single_walk_edge().graph);
    let request = json!({"origin": {"node": "B"}, "destination": {"node": "A"}});
    let (status, body) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"]["kind"], "unreachable");
}

#[tokio::test]
async fn route_follows_the_response_schema() {
    let (_, app) = service(fx::single_walk_edge().graph);
    let request = json!({
        "origin": {"node": "A"},
        "destination": {"node": "B"},
        "departure_time": "2026-05-02T09:30:00+02:00"
    });
    let (status, body) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["departure_time"], "2026-05-02T09:30:00+02:00");
    let alternatives = body["alternatives"].as_array().unwrap();
    assert_eq!(alternatives.len(), 1);
    let route = &alternatives[0];
    assert_eq!(
        route["legs"][0],
        json!({"mode": "walk", "nodes": ["A", "B"], "distance_m": 300.0, "in_motion_s": 216.0, "transfer_s": 0.0})
    );
    assert_eq!(
        route["totals"],
        json!({"duration_s": 216.0, "distance_m": 300.0, "perceived_cost": 216.0, "profile_id": "neutral"})
    );
}

#[tokio::test]
async fn coordinates_snap_to_the_nearest_node() {
    let f = fx::single_walk_edge();
    let b = f.graph.node(f.node("B"));
    let (_, app) = service(f.graph.clone());
    let request = json!({"origin": {"node": "A"}, "destination": {"lat": b.lat + 0.0003, "lon": b.lon}});
    let (status, body) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["alternatives"][0]["legs"][0]["nodes"], json!(["A", "B"]));
}

#[tokio::test]
async fn halving_speed_doubles_the_car_time() {
    let (_, app) = service(fx::car_hop().graph);
    let request = car_hop_request();
    let (_, before) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(car_seconds(&before), 90.0);

    let overrides = json!([halve("A", "B", "car", &in_hours(1))]);
    let (status, body) = call(&app, Method::PUT, "/overrides", Some(&overrides)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"overrides": 1}));
    let (_, health) = call(&app, Method::GET, "/health", None).await;
    assert_eq!(health["overrides"], 1);

    let (_, after) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(car_seconds(&after), 180.0);

    let (_, body) = call(&app, Method::PUT, "/overrides", Some(&json!([]))).await;
    assert_eq!(body, json!({"overrides": 0}));
    let (_, cleared) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(car_seconds(&cleared), 90.0);
}

#[tokio::test]
async fn overrides_touch_only_their_edge_and_mode() {
    let (_, app) = service(fx::car_hop().graph);
    let overrides = json!([halve("B", "A", "car", &in_hours(1))]);
    call(&app, Method::PUT, "/overrides", Some(&overrides)).await;
    let (_, body) = call(&app, Method::POST, "/route", Some(&car_hop_request())).await;
    assert_eq!(car_seconds(&body), 90.0);
}

#[tokio::test]
async fn expired_overrides_are_ignored() {
    let (_, app) = service(fx::car_hop().graph);
    let overrides = json!([halve("A", "B", "car", &in_hours(-1))]);
    let (status, body) = call(&app, Method::PUT, "/overrides", Some(&overrides)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, json!({"overrides": 0}));
    let (_, health) = call(&app, Method::GET, "/health", None).await;
    assert_eq!(health["overrides"], 0);
    let (_, route) = call(&app, Method::POST, "/route", Some(&car_hop_request())).await;
    assert_eq!(car_seconds(&route), 90.0);
}

#[tokio::test]
async fn invalid_overrides_leave_the_set_unchanged() {
    let (_, app) = service(fx::car_hop().graph);
    call(
        &app,
        Method::PUT,
        "/overrides",
        Some(&json!([halve("A", "B", "car", &in_hours(1))])),
    )
    .await;
    let cases = [
        (json!([halve("A", "Z", "car", &in_hours(1))]), "[0]"),
        (json!([halve("A", "B", "walk", &in_hours(1))]), "[0]"),
        (
            json!([{"from": "A", "to": "B", "mode": "car", "factor": 11.0, "expiry": in_hours(1)}]),
            "[0].factor",
        ),
        (json!([{"from": "A", "to": "B", "mode": "car", "factor": 0.5}]), "[0]"),
    ];
    for (body, field) in cases {
        let (status, error) = call(&app, Method::PUT, "/overrides", Some(&body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        assert_eq!(error["error"]["field"], field, "{body}");
    }
    let (_, health) = call(&app, Method::GET, "/health", None).await;
    assert_eq!(health["overrides"], 1);
}

#[tokio::test]
async fn queries_keep_the_snapshot_they_started_with() {
    let (service, _) = service(fx::car_hop().graph);
    let request = car_hop_request().to_string();
    let before = service.snapshot();
    service
        .replace_overrides(&json!([halve("A", "B", "car", &in_hours(1))]).to_string())
        .unwrap();
    let after = service.snapshot();
    let old = intermodal_service::plan_route(before.network(), &request, service.family()).unwrap();
    let new = intermodal_service::plan_route(after.network(), &request, service.family()).unwrap();
    assert_eq!(car_seconds(&old), 90.0);
    assert_eq!(car_seconds(&new), 180.0);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_queries_see_whole_override_sets() {
    let (_, app) = service(fx::car_hop().graph);
    let request = car_hop_request();
    let writer = {
        let app = app.clone();
        tokio::spawn(async move {
            for i in 0..40 {
                let set = if i % 2 == 0 {
                    json!([halve("A", "B", "car", &in_hours(1))])
                } else {
                    json!([])
                };
                call(&app, Method::PUT, "/overrides", Some(&set)).await;
            }
        })
    };
    let readers: Vec<_> = (0..40)
        .map(|_| {
            let app = app.clone();
            let request = request.clone();
            tokio::spawn(async move { car_seconds(&call(&app, Method::POST, "/route", Some(&request)).await.1) })
        })
        .collect();
    writer.await.unwrap();
    for r in readers {
        let seconds = r.await.unwrap();
        assert!(seconds == 90.0 || seconds == 180.0, "{seconds}");
    }
}

#[tokio::test]
async fn profiles_lists_the_default_family() {
    let (_, app) = service(fx::single_walk_edge().graph);
    let (status, body) = call(&app, Method::GET, "/profiles", None).await;
    assert_eq!(status, StatusCode::OK);
    let profiles = body["profiles"].as_array().unwrap();
    let ids: Vec<&str> = profiles.iter().map(|p| p["id"].as_str().unwrap()).collect();
    assert_eq!(
        ids,
        ["neutral", "walk-averse", "bike-favoring", "car-averse", "pt-favoring"]
    );
    assert_eq!(
        profiles[3]["multipliers"],
        json!({"walk": 1.0, "bike": 1.0, "car": 50.0, "motorhome": 50.0, "pt": 1.0})
    );
}

#[tokio::test]
async fn request_family_replaces_the_default() {
    let (_, app) = service(fx::walk_or_bike().graph);
    let request = json!({
        "origin": {"node": "A"},
        "destination": {"node": "B"},
        "vehicles": [{"kind": "bike", "location": {"node": "A"}}],
        "switch_costs": {"board_s": 0, "pickup_s": {"bike": 0}, "park_s": {"bike": 0}},
        "profile_family": [
            {"id": "neutral", "multipliers": {"walk": 1, "bike": 1, "car": 1, "motorhome": 1, "pt": 1}},
            {"id": "walk2-bike3", "multipliers": {"walk": 2, "bike": 3, "car": 100, "motorhome": 100, "pt": 100}}
        ]
    });
    let (status, body) = call(&app, Method::POST, "/route", Some(&request)).await;
    assert_eq!(status, StatusCode::OK);
    let alternatives = body["alternatives"].as_array().unwrap();
    assert_eq!(alternatives.len(), 2);
    assert_eq!(modes(&alternatives[0]), ["bike"]);
    assert_eq!(modes(&alternatives[1]), ["walk"]);
    assert_eq!(alternatives[1]["totals"]["profile_id"], "walk2-bike3");
    assert_eq!(alternatives[1]["totals"]["perceived_cost"], 1800.0);
    assert_eq!(alternatives[1]["neutral_cost"], 900.0);
}

#[tokio::test]
async fn motorhome_endpoint_returns_labelled_options() {
    let (_, app) = service(fx::narrow_core().graph);
    let request = json!({
        "origin": {"node": "H"},
        "destination": {"node": "D"},
        "vehicles": [{"kind": "motorhome", "location": {"node": "H"}}]
    });
    let (status, body) = call(&app, Method::POST, "/motorhome", Some(&request)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let options = body["options"].as_array().unwrap();
    let labels: Vec<&str> = options.iter().map(|o| o["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["designated_motorhome", "car_parking_risk", "park_closest"]);
    let flags: Vec<bool> = options.iter().map(|o| o["risk_flag"].as_bool().unwrap()).collect();
    assert_eq!(flags, [false, true, true]);
    assert_eq!(options[0]["parking_node"], "R");
    assert_eq!(modes(&options[0]), ["motorhome", "walk", "pt"]);
    assert!(!modes(&options[2]).contains(&"pt".to_string()));

    let without = json!({"origin": {"node": "H"}, "destination": {"node": "D"}, "vehicles": []});
    let (status, body) = call(&app, Method::POST, "/motorhome", Some(&without)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"]["field"], "vehicles");
}
