//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use intermodal_core::motorhome::option_request;
use intermodal_core::search::enumerate_feasible_routes;
use intermodal_core::{
    generate_alternatives, plausibility_filter, shortest_route, three_option_routes, Graph, Mode, ModeSet,
    MotorhomeLabel, MotorhomeRequest, MultiplierProfile, PlausibilityThresholds, ProfileFamily, Route, RoutingRequest,
    SearchError, VehicleKind,
};
use intermodal_fixtures::{self as fx, Fixture, RandomShape};
use intermodal_service::Service;

const BUDGET: usize = 1_000_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn relative_error(actual: f64, expected: f64) -> f64 {
    ((actual - expected) / expected).abs()
}

fn oracle_min(graph: &Graph, request: &RoutingRequest, profile: &MultiplierProfile) -> Result<Option<u64>, String> {
    let all = enumerate_feasible_routes(graph, request, BUDGET).map_err(|e| e.to_string())?;
    Ok(all.iter().map(|r| r.perceived_under(profile).0).min())
}

fn random_fixtures(first_seed: u64, count: usize) -> Vec<Fixture> {
    (first_seed..first_seed + count as u64)
        .map(|seed| fx::random_fixture(seed, RandomShape::default()))
        .collect()
}

fn worked_example() -> Outcome {
    let started = Instant::now();
    let f = fx::walk_or_bike();
    let profile = fx::walk2_bike3();
    let route = shortest_route(&f.graph, &f.request, &profile).map_err(|e| e.to_string())?;
    ensure(route.modes() == [Mode::Walk], || {
        format!("returned {:?}", route.modes())
    })?;
    let walk = route.perceived_cost.as_secs_f64();
    let all = enumerate_feasible_routes(&f.graph, &f.request, BUDGET).map_err(|e| e.to_string())?;
    let bike = all
        .iter()
        .find(|r| r.modes() == [Mode::Bike])
        .ok_or("no bike alternative")?
        .perceived_under(&profile)
        .as_secs_f64();
    let elapsed = started.elapsed();
    ensure(relative_error(walk, 30.0 * 60.0) <= 1e-9, || {
        format!("walk costs {walk} s")
    })?;
    ensure(relative_error(bike, 33.0 * 60.0) <= 1e-9, || {
        format!("bike costs {bike} s")
    })?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("walk {walk:.3} s < bike {bike:.3} s in {elapsed:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let started = Instant::now();
    let fixtures = random_fixtures(10_000, 120);
    let mut compared = 0;
    let mut reachable_fixtures = 0;
    for (i, f) in fixtures.iter().enumerate() {
        ensure(f.graph.node_count() <= 10 && f.request.vehicles.len() <= 3, || {
            format!("fixture {i} too large")
        })?;
        let request = RoutingRequest {
            allowed_modes: ModeSet::ALL,
            ..f.request.clone()
        };
        let mut rng = fx::rng(i as u64);
        let profiles = [
            MultiplierProfile::neutral(),
            fx::random_profile(&mut rng, "p1"),
            fx::random_profile(&mut rng, "p2"),
        ];
        let mut reachable = false;
        for profile in &profiles {
            let expected = oracle_min(&f.graph, &request, profile)?;
            let actual = match shortest_route(&f.graph, &request, profile) {
                Ok(route) => Some(route.perceived_cost.0),
                Err(SearchError::Unreachable) => None,
                Err(e) => return Err(format!("fixture {i}: {e}")),
            };
            ensure(actual == expected, || {
                format!(
                    "fixture {i} profile {}: search {actual:?} vs oracle {expected:?}",
                    profile.id()
                )
            })?;
            reachable |= actual.is_some();
            compared += 1;
        }
        reachable_fixtures += usize::from(reachable);
    }
    let elapsed = started.elapsed();
    ensure(reachable_fixtures >= 50, || {
        format!("only {reachable_fixtures} reachable fixtures")
    })?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{compared}/{compared} searches agree over {} fixtures ({reachable_fixtures} reachable) in {elapsed:.2?}",
        fixtures.len()
    ))
}

fn named_fixtures() -> Vec<(&'static str, Fixture)> {
    vec![
        ("walk-or-bike", fx::walk_or_bike()),
        ("nearby-stop", fx::stop_next_door_bike_far_away()),
        ("sixty-metre-hop", fx::sixty_metre_bike_hop()),
        ("narrow-core", fx::narrow_core()),
        ("single-car-park", fx::single_car_park()),
        ("short-or-fast", fx::short_slow_or_long_fast()),
        ("five-node", fx::five_node_car_walk()),
        ("single-edge", fx::single_walk_edge()),
        ("bike-or-bus", fx::bike_fastest_bus_second()),
        ("car-hop", fx::car_hop()),
        ("grid-6x6", fx::grid(6, 6)),
    ]
}

fn uniform_invariance() -> Outcome {
    let mut fixtures = named_fixtures();
    fixtures.extend(random_fixtures(20_000, 100).into_iter().map(|f| ("random", f)));
    let neutral = MultiplierProfile::neutral();
    let mut checked = 0;
    for (name, f) in &fixtures {
        let base = match shortest_route(&f.graph, &f.request, &neutral) {
            Ok(route) => route,
            Err(SearchError::Unreachable) => continue,
            Err(e) => return Err(format!("{name}: {e}")),
        };
        for c in [1.0, 5.0, 100.0] {
            let uniform = MultiplierProfile::uniform("uniform", c).map_err(|e| e.to_string())?;
            let route = shortest_route(&f.graph, &f.request, &uniform).map_err(|e| format!("{name}: {e}"))?;
            ensure(route.legs == base.legs, || format!("{name}: legs differ at c = {c}"))?;
            ensure(route.perceived_cost.0 == base.perceived_cost.0 * c as u64, || {
                format!(
                    "{name}: cost {} is not {c} x {}",
                    route.perceived_cost.as_secs_f64(),
                    base.perceived_cost.as_secs_f64()
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (fixture, c) pairs identical and scaled exactly"))
}

/// Pairs whose narrower request has no route are skipped, since they
/// cannot show an increase.
fn monotonicity() -> Outcome {
    let mut pairs = 0;
    let mut seed = 30_000;
    while pairs < 100 {
        seed += 1;
        let f = fx::random_fixture(seed, RandomShape::default());
        let mut rng = fx::rng(seed);
        let sub = fx::random_modes(&mut rng);
        let sup = sub.union(fx::random_modes(&mut rng));
        if sup == sub {
            continue;
        }
        let profile = fx::random_profile(&mut rng, "p");
        let narrow = RoutingRequest {
            allowed_modes: sub,
            ..f.request.clone()
        };
        let wide = RoutingRequest {
            allowed_modes: sup,
            ..f.request.clone()
        };
        let Ok(n) = shortest_route(&f.graph, &narrow, &profile) else {
            continue;
        };
        pairs += 1;
        let w = shortest_route(&f.graph, &wide, &profile)
            .map_err(|e| format!("seed {seed}: more modes lost the route ({e})"))?;
        ensure(w.perceived_cost <= n.perceived_cost, || {
            format!(
                "seed {seed}: {:.3} s with more modes vs {:.3} s",
                w.perceived_cost.as_secs_f64(),
                n.perceived_cost.as_secs_f64()
            )
        })?;
    }
    Ok(format!("0 violations over {pairs} reachable pairs"))
}

fn has_short_bike_leg(route: &Route) -> bool {
    route
        .legs
        .iter()
        .any(|l| l.mode == Mode::Bike && l.in_motion.as_secs_f64() < 120.0)
}

fn nearby_stop_beats_far_bike() -> Outcome {
    let f = fx::stop_next_door_bike_far_away();
    let best = shortest_route(&f.graph, &f.request, &MultiplierProfile::neutral()).map_err(|e| e.to_string())?;
    ensure(best.legs.iter().all(|l| l.mode != Mode::Bike), || {
        format!("best route uses {:?}", best.modes())
    })?;
    let set = generate_alternatives(&f.graph, &f.request, &ProfileFamily::default()).map_err(|e| e.to_string())?;
    ensure(set.routes().all(|r| !has_short_bike_leg(r)), || {
        "short bike leg returned".into()
    })?;

    let thresholds = PlausibilityThresholds::default();
    let mut generated = 0;
    let mut removed = 0;
    let mut fixtures: Vec<Fixture> = vec![f, fx::sixty_metre_bike_hop()];
    fixtures.extend(random_fixtures(40_000, 60));
    for f in &fixtures {
        let routes = enumerate_feasible_routes(&f.graph, &f.request, BUDGET).map_err(|e| e.to_string())?;
        let short = routes.iter().filter(|r| has_short_bike_leg(r)).count();
        let kept = plausibility_filter(routes.clone(), &thresholds);
        let fallback = kept.len() == 1 && kept[0].plausibility_warning;
        ensure(fallback || kept.iter().all(|r| !has_short_bike_leg(r)), || {
            "filter kept a short bike leg".into()
        })?;
        generated += routes.len();
        removed += short - usize::from(fallback && has_short_bike_leg(&kept[0]));
    }
    let hop = fx::sixty_metre_bike_hop();
    let hop_routes = enumerate_feasible_routes(&hop.graph, &hop.request, BUDGET).map_err(|e| e.to_string())?;
    ensure(hop_routes.iter().any(has_short_bike_leg), || {
        "hop fixture has no short bike leg".into()
    })?;
    let hop_set =
        generate_alternatives(&hop.graph, &hop.request, &ProfileFamily::default()).map_err(|e| e.to_string())?;
    ensure(hop_set.routes().all(|r| !has_short_bike_leg(r)), || {
        "hop alternative rides the bike".into()
    })?;
    Ok(format!(
        "best route {:?}; {removed} of {generated} generated routes had a bike leg under 120 s and were removed",
        best.modes()
    ))
}

fn motorhome_showcase() -> Outcome {
    let f = fx::narrow_core();
    let request = MotorhomeRequest::new(f.request.clone());
    let neutral = MultiplierProfile::neutral();
    let options = three_option_routes(&f.graph, &request, &neutral).map_err(|e| e.to_string())?;
    let find = |label| {
        options
            .iter()
            .find(|o| o.label == label)
            .ok_or(format!("missing {label:?}"))
    };
    let a = find(MotorhomeLabel::DesignatedMotorhome)?;
    let b = find(MotorhomeLabel::CarParkingRisk)?;
    let c = find(MotorhomeLabel::ParkClosest)?;

    let width = VehicleKind::Motorhome.default_dimensions();
    for leg in a.route.legs.iter().filter(|l| l.mode == Mode::Motorhome) {
        for &e in &leg.edges {
            ensure(f.graph.edge(e).restrictions.admits(&width), || {
                format!(
                    "option A drives {:?}",
                    leg.nodes.iter().map(|&n| f.graph.node_id(n)).collect::<Vec<_>>()
                )
            })?;
        }
    }
    ensure(!a.risk_flag && b.risk_flag && c.risk_flag, || "wrong risk flags".into())?;
    ensure(c.route.legs.iter().all(|l| l.mode != Mode::PublicTransport), || {
        "option C uses PT".into()
    })?;

    for label in MotorhomeLabel::ALL {
        let r = option_request(&request, label).map_err(|e| e.to_string())?;
        let expected = oracle_min(&f.graph, &r, &neutral)?;
        let actual = options
            .iter()
            .find(|o| o.label == label)
            .map(|o| o.route.perceived_cost.0);
        ensure(actual == expected, || {
            format!("{}: {actual:?} vs oracle {expected:?}", label.as_str())
        })?;
    }
    Ok(format!(
        "A parks at {} via {:?}; B and C flagged; C {:?}; all match their oracles",
        f.graph.node_id(a.parking_node),
        a.route.modes(),
        c.route.modes()
    ))
}

async fn call(app: &axum::Router, method: Method, uri: &str, body: &Value) -> Result<(StatusCode, Value), String> {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .body(Body::from(body.to_string()))
        .map_err(|e| e.to_string())?;
    let response = app.clone().oneshot(request).await.map_err(|e| e.to_string())?;
    let status = response.status();
    let bytes = response
        .into_body()
        .collect()
        .await
        .map_err(|e| e.to_string())?
        .to_bytes();
    Ok((status, serde_json::from_slice(&bytes).map_err(|e| e.to_string())?))
}

fn car_in_motion(body: &Value) -> Result<f64, String> {
    let legs = body["alternatives"][0]["legs"].as_array().ok_or("no legs")?;
    let car: Vec<&Value> = legs.iter().filter(|l| l["mode"] == "car").collect();
    ensure(car.len() == 1, || format!("expected one car leg, got {body}"))?;
    car[0]["in_motion_s"].as_f64().ok_or("no in_motion_s".into())
}

fn override_arithmetic() -> Outcome {
    let f = fx::car_hop();
    // 1000 m at 40 km/h.
    let expected_before = 90.0;
    let app = intermodal_service::router(Service::new(f.graph, ProfileFamily::default()));
    let request = json!({
        "origin": {"node": "A"},
        "destination": {"node": "B"},
        "allowed_modes": ["car"],
        "vehicles": [{"kind": "car", "location": {"node": "A"}}],
        "switch_costs": {"board_s": 0, "pickup_s": {"car": 0}, "park_s": {"car": 0}}
    });
    let expiry = (chrono::Utc::now() + chrono::Duration::hours(1)).to_rfc3339();
    let overrides = json!([{"from": "A", "to": "B", "mode": "car", "factor": 0.5, "expiry": expiry}]);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(async {
        let (status, before) = call(&app, Method::POST, "/route", &request).await?;
        ensure(status == StatusCode::OK, || format!("{status}: {before}"))?;
        let (status, put) = call(&app, Method::PUT, "/overrides", &overrides).await?;
        ensure(status == StatusCode::OK, || format!("{status}: {put}"))?;
        let (_, after) = call(&app, Method::POST, "/route", &request).await?;
        let (before, after) = (car_in_motion(&before)?, car_in_motion(&after)?);
        ensure(relative_error(before, expected_before) <= 1e-9, || {
            format!("before {before} s")
        })?;
        ensure(relative_error(after, 2.0 * before) <= 1e-9, || {
            format!("{before} s became {after} s")
        })?;
        Ok(format!("car edge {before:.3} s -> {after:.3} s"))
    })
}

fn determinism() -> Outcome {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_intermodal"))
            .arg("route")
            .arg("--graph")
            .arg(data.join("demo-city.json"))
            .arg("--request")
            .arg(data.join("demo-request.json"))
            .output()
            .map_err(|e| e.to_string())
    };
    let first = run()?;
    ensure(first.status.success(), || {
        String::from_utf8_lossy(&first.stderr).into_owned()
    })?;
    for i in 2..=3 {
        let again = run()?;
        ensure(again.stdout == first.stdout, || format!("run {i} differs"))?;
    }
    Ok(format!("3 runs, {} identical bytes each", first.stdout.len()))
}

fn large_grid() -> Outcome {
    let f = fx::grid(200, 250);
    ensure(f.graph.node_count() == 50_000 && f.request.vehicles.len() == 2, || {
        "wrong grid".into()
    })?;
    let neutral = MultiplierProfile::neutral();
    let mut slowest = Duration::ZERO;
    let mut modes = Vec::new();
    for _ in 0..3 {
        let started = Instant::now();
        let route = shortest_route(&f.graph, &f.request, &neutral).map_err(|e| e.to_string())?;
        slowest = slowest.max(started.elapsed());
        modes = route.modes();
    }
    ensure(slowest < Duration::from_millis(500), || {
        format!("slowest query took {slowest:?}")
    })?;
    Ok(format!(
        "{} nodes, {} edges, route {modes:?}, slowest of 3 queries {slowest:.2?}",
        f.graph.node_count(),
        f.graph.edge_count()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked example", worked_example),
        ("oracle equivalence", oracle_equivalence),
        ("uniform multipliers", uniform_invariance),
        ("mode-set monotonicity", monotonicity),
        ("nearby stop beats far bike", nearby_stop_beats_far_bike),
        ("motorhome options", motorhome_showcase),
        ("override arithmetic", override_arithmetic),
        ("determinism", determinism),
        ("50k-node query", large_grid),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let message = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL  {name}: {reason}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
