//! Route alternatives from systematically varied multiplier profiles.
//!
//! Every profile still minimizes (perceived) travel time; what changes is
//! how each mode's time is perceived, so different profiles surface
//! different mode choices. Results pass through three filters in order:
//! plausibility, deduplication and dominance.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Mode, NodeIdx};
use crate::overlay::Network;
use crate::profile::MultiplierProfile;
use crate::request::{Objective, RoutingRequest};
use crate::search::{self, Route, SearchError};
use crate::units::{Micros, PerceivedCost};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("profile family is empty")]
    Empty,
    #[error("first profile {0:?} is not neutral (all multipliers 1)")]
    NeutralNotFirst(String),
    #[error("duplicate profile id {0:?}")]
    DuplicateId(String),
}

/// Ordered multiplier profiles; the first is always the neutral profile.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileFamily {
    profiles: Vec<MultiplierProfile>,
    /// When false the neutral profile only annotates results and is not
    /// searched itself.
    neutral_searched: bool,
}

impl ProfileFamily {
    pub fn new(profiles: Vec<MultiplierProfile>) -> Result<Self, FamilyError> {
        let first = profiles.first().ok_or(FamilyError::Empty)?;
        if !first.is_neutral() {
            return Err(FamilyError::NeutralNotFirst(first.id().to_string()));
        }
        let mut ids = HashSet::new();
        for p in &profiles {
            if !ids.insert(p.id()) {
                return Err(FamilyError::DuplicateId(p.id().to_string()));
            }
        }
        Ok(ProfileFamily {
            profiles,
            neutral_searched: true,
        })
    }

    /// A traveler's own profiles, searched without the neutral one. Neutral
    /// costs are still reported for every result.
    pub fn personal(profiles: Vec<MultiplierProfile>) -> Result<Self, FamilyError> {
        if profiles.is_empty() {
            return Err(FamilyError::Empty);
        }
        let mut all = vec![MultiplierProfile::neutral()];
        all.extend(profiles);
        let mut family = ProfileFamily::new(all)?;
        family.neutral_searched = false;
        Ok(family)
    }

    pub fn neutral_only() -> Self {
        ProfileFamily {
            profiles: vec![MultiplierProfile::neutral()],
            neutral_searched: true,
        }
    }

    pub fn profiles(&self) -> &[MultiplierProfile] {
        &self.profiles
    }

    /// The profiles each query runs under.
    pub fn searched(&self) -> &[MultiplierProfile] {
        if self.neutral_searched {
            &self.profiles
        } else {
            &self.profiles[1..]
        }
    }

    pub fn is_personal(&self) -> bool {
        !self.neutral_searched
    }

    pub fn neutral(&self) -> &MultiplierProfile {
        &self.profiles[0]
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

impl Default for ProfileFamily {
    /// Neutral, walk-averse, bike-favoring, car-averse and pt-favoring.
    fn default() -> Self {
        // Order of values: walk, bike, car, motorhome, pt.
        let p = |id: &str, values: [f64; 5]| MultiplierProfile::new(id, values).expect("defaults are in range");
        ProfileFamily {
            profiles: vec![
                MultiplierProfile::neutral(),
                p("walk-averse", [4.0, 1.0, 1.0, 1.0, 1.0]),
                p("bike-favoring", [3.0, 1.0, 6.0, 6.0, 2.0]),
                p("car-averse", [1.0, 1.0, 50.0, 50.0, 1.0]),
                p("pt-favoring", [2.0, 8.0, 8.0, 8.0, 1.0]),
            ],
            neutral_searched: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThresholdError {
    #[error("walk legs are never implausible; walk threshold must be 0")]
    WalkThreshold,
    #[error("threshold for {0} must be finite and non-negative")]
    Invalid(Mode),
}

/// Minimum in-motion seconds for a leg in each mode to count as plausible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlausibilityThresholds {
    min_in_motion: [Micros; 5],
}

impl PlausibilityThresholds {
    /// Seconds per mode in [`Mode::ALL`] order.
    pub fn new(seconds: [f64; 5]) -> Result<Self, ThresholdError> {
        let mut min_in_motion = [Micros::ZERO; 5];
        for mode in Mode::ALL {
            let s = seconds[mode.index()];
            if !(s.is_finite() && s >= 0.0) {
                return Err(ThresholdError::Invalid(mode));
            }
            min_in_motion[mode.index()] = Micros::from_secs(s);
        }
        if min_in_motion[Mode::Walk.index()] != Micros::ZERO {
            return Err(ThresholdError::WalkThreshold);
        }
        Ok(PlausibilityThresholds { min_in_motion })
    }

    pub fn min_in_motion(&self, mode: Mode) -> Micros {
        self.min_in_motion[mode.index()]
    }

    pub fn is_plausible(&self, route: &Route) -> bool {
        route
            .legs
            .iter()
            .all(|l| l.mode == Mode::Walk || l.in_motion >= self.min_in_motion(l.mode))
    }
}

impl Default for PlausibilityThresholds {
    fn default() -> Self {
        Self::new([0.0, 120.0, 120.0, 300.0, 60.0]).expect("defaults are valid")
    }
}

/// Drops routes with a non-walk leg shorter than its mode's threshold. If
/// that would drop everything, the fastest route is kept with
/// `plausibility_warning` set.
pub fn plausibility_filter(routes: Vec<Route>, thresholds: &PlausibilityThresholds) -> Vec<Route> {
    let (plausible, rest): (Vec<Route>, Vec<Route>) = routes
        .into_iter()
        .partition(|r| !r.plausibility_warning && thresholds.is_plausible(r));
    if !plausible.is_empty() {
        return plausible;
    }
    rest.into_iter()
        .enumerate()
        .min_by_key(|(i, r)| (r.total_duration, *i))
        .map(|(_, mut r)| {
            r.plausibility_warning = true;
            vec![r]
        })
        .unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternative {
    /// Optimal under the profile named by `route.profile_id`.
    pub route: Route,
    pub mode_changes: usize,
    /// Duration and distance in millimetres per mode.
    pub breakdown: BTreeMap<Mode, (Micros, u64)>,
    pub neutral_cost: PerceivedCost,
}

impl Alternative {
    fn new(route: Route, neutral: &MultiplierProfile) -> Self {
        Alternative {
            mode_changes: route.mode_changes(),
            breakdown: route.mode_breakdown(),
            neutral_cost: route.perceived_under(neutral),
            route,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlternativeSet {
    pub alternatives: Vec<Alternative>,
}

impl AlternativeSet {
    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn routes(&self) -> impl Iterator<Item = &Route> {
        self.alternatives.iter().map(|a| &a.route)
    }
}

pub fn generate_alternatives<'a>(
    net: impl Into<Network<'a>>,
    request: &RoutingRequest,
    family: &ProfileFamily,
) -> Result<AlternativeSet, SearchError> {
    generate_alternatives_with(net, request, family, &PlausibilityThresholds::default())
}

/// Runs one search per profile and filters the results. Fails only if every
/// profile fails.
pub fn generate_alternatives_with<'a>(
    net: impl Into<Network<'a>>,
    request: &RoutingRequest,
    family: &ProfileFamily,
    thresholds: &PlausibilityThresholds,
) -> Result<AlternativeSet, SearchError> {
    let net = net.into();
    let results: Vec<Result<Route, SearchError>> = match request.objective {
        // Multipliers do not apply to distance; every profile would agree.
        Objective::ShortestDistance => vec![search::shortest_distance_route(net, request)],
        Objective::FastestTime => family
            .searched()
            .par_iter()
            .map(|p| search::shortest_route(net, request, p))
            .collect(),
    };

    let mut routes = Vec::with_capacity(results.len());
    let mut first_error = None;
    for r in results {
        match r {
            Ok(route) => routes.push(route),
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    if routes.is_empty() {
        return Err(first_error.unwrap_or(SearchError::Unreachable));
    }

    let routes = plausibility_filter(routes, thresholds);
    let routes = dedup(routes);
    let routes = drop_dominated(routes);

    let neutral = family.neutral();
    let mut alternatives: Vec<Alternative> = routes.into_iter().map(|r| Alternative::new(r, neutral)).collect();
    alternatives.sort_by_key(|a| (a.route.total_duration, a.neutral_cost));
    Ok(AlternativeSet { alternatives })
}

/// Keeps the first route for each (mode sequence, node path).
fn dedup(routes: Vec<Route>) -> Vec<Route> {
    let mut seen: HashSet<(Vec<Mode>, Vec<NodeIdx>)> = HashSet::new();
    routes
        .into_iter()
        .filter(|r| seen.insert((r.modes(), r.node_path())))
        .collect()
}

/// Removes routes beaten on both duration and mode changes, unless the
/// route is the last survivor with its mode sequence.
fn drop_dominated(routes: Vec<Route>) -> Vec<Route> {
    let n = routes.len();
    let modes: Vec<Vec<Mode>> = routes.iter().map(Route::modes).collect();
    let changes: Vec<usize> = routes.iter().map(Route::mode_changes).collect();
    let mut alive = vec![true; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse((routes[i].total_duration, changes[i], i)));
    for r in order {
        let dominated = (0..n).any(|o| {
            o != r
                && alive[o]
                && routes[o].total_duration <= routes[r].total_duration
                && changes[o] <= changes[r]
                && (routes[o].total_duration < routes[r].total_duration || changes[o] < changes[r])
        });
        if !dominated {
            continue;
        }
        let mode_sequence_shared = (0..n).any(|o| o != r && alive[o] && modes[o] == modes[r]);
        if mode_sequence_shared {
            alive[r] = false;
        }
    }
    routes
        .into_iter()
        .zip(alive)
        .filter_map(|(r, keep)| keep.then_some(r))
        .collect()
}
