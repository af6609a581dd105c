//! Intermodal shortest-route search.
//!
//! Mode choice is an output of the search. The traveler starts on foot (or
//! already riding a vehicle for the motorhome planner) and the search state
//! records what they are currently carried by and which owned vehicles have
//! already been parked:
//!
//! * on foot: walk edges, board a transit line that departs here, pick up an
//!   owned vehicle located here;
//! * riding a vehicle: drive edges that allow the vehicle's network mode and
//!   whose restrictions admit it, park at a compatible facility;
//! * on a transit line: ride that line's edges, alight anywhere.
//!
//! Each owned vehicle is ridden in at most one contiguous leg. Edge time is
//! `length / speed`; boarding costs half the headway plus the boarding
//! time. Every time component is weighted by the multiplier of the mode it
//! is spent in.

mod dijkstra;
mod enumerate;
mod model;
mod route;

use thiserror::Error;

use crate::overlay::Network;
use crate::profile::MultiplierProfile;
use crate::request::{Objective, RequestError, RoutingRequest};

pub use route::{Route, RouteLeg};

use dijkstra::Primary;
use model::Model;

/// Upper bound accepted by [`enumerate_feasible_routes`].
pub const MAX_ENUMERATION_STATES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("destination unreachable with the permitted modes and vehicles")]
    Unreachable,
    #[error("invalid request: {0}")]
    InvalidRequest(#[from] RequestError),
    #[error("state budget exceeded: more than {budget} reachable states")]
    StateBudgetExceeded { budget: usize },
}

/// Route minimizing perceived travel time under `profile`.
///
/// Ties go to the shorter actual duration, then fewer legs, then the
/// lexicographically smaller node-id sequence.
pub fn shortest_route<'a>(
    net: impl Into<Network<'a>>,
    request: &RoutingRequest,
    profile: &MultiplierProfile,
) -> Result<Route, SearchError> {
    let net = net.into();
    request.validate(net.graph())?;
    if request.origin == request.destination {
        return Ok(Route::empty(profile.id()));
    }
    let model = Model::new(net, request);
    let found = dijkstra::search(&model, Primary::Perceived(profile)).ok_or(SearchError::Unreachable)?;
    Ok(route::build_route(&model, &found.steps, profile))
}

/// Route minimizing travelled distance; waits count as zero distance and
/// multipliers are not applied. The perceived cost is reported under the
/// neutral profile.
pub fn shortest_distance_route<'a>(
    net: impl Into<Network<'a>>,
    request: &RoutingRequest,
) -> Result<Route, SearchError> {
    let net = net.into();
    request.validate(net.graph())?;
    let neutral = MultiplierProfile::neutral();
    if request.origin == request.destination {
        return Ok(Route::empty(neutral.id()));
    }
    let model = Model::new(net, request);
    let found = dijkstra::search(&model, Primary::Distance).ok_or(SearchError::Unreachable)?;
    Ok(route::build_route(&model, &found.steps, &neutral))
}

/// Dispatches on `request.objective`.
pub fn plan<'a>(
    net: impl Into<Network<'a>>,
    request: &RoutingRequest,
    profile: &MultiplierProfile,
) -> Result<Route, SearchError> {
    match request.objective {
        Objective::FastestTime => shortest_route(net, request, profile),
        Objective::ShortestDistance => shortest_distance_route(net, request),
    }
}

/// Every feasible route that corresponds to a simple path through the state
/// space, priced under the neutral profile. Intended for checking
/// [`shortest_route`] on small networks.
pub fn enumerate_feasible_routes<'a>(
    net: impl Into<Network<'a>>,
    request: &RoutingRequest,
    max_states: usize,
) -> Result<Vec<Route>, SearchError> {
    let net = net.into();
    request.validate(net.graph())?;
    let neutral = MultiplierProfile::neutral();
    if request.origin == request.destination {
        return Ok(vec![Route::empty(neutral.id())]);
    }
    let budget = max_states.min(MAX_ENUMERATION_STATES);
    let model = Model::new(net, request);
    enumerate::reachable_states(&model, budget).map_err(|_| SearchError::StateBudgetExceeded { budget })?;
    Ok(enumerate::simple_paths(&model)
        .iter()
        .map(|steps| route::build_route(&model, steps, &neutral))
        .collect())
}
