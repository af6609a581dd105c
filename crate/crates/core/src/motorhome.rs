//! Three route options for a traveler whose trip starts in a motorhome.
//!
//! | option               | network   | size limits | parks at                    | egress            |
//! |----------------------|-----------|-------------|-----------------------------|-------------------|
//! | designated motorhome | motorhome | enforced    | facilities for motorhomes   | requested modes   |
//! | car parking (risk)   | car       | ignored     | facilities for cars         | requested modes   |
//! | park closest (risk)  | car       | ignored     | facilities for cars         | walk only         |
//!
//! All three minimize perceived time. With walking as the only egress the
//! third option ends up parking as near the destination as the car network
//! allows.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Mode, ModeSet, NodeIdx, VehicleKind};
use crate::overlay::Network;
use crate::profile::MultiplierProfile;
use crate::request::{Objective, RequestError, RoutingRequest, VehicleUsage};
use crate::search::{self, Route, SearchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MotorhomeLabel {
    DesignatedMotorhome,
    CarParkingRisk,
    ParkClosest,
}

impl MotorhomeLabel {
    pub const ALL: [MotorhomeLabel; 3] = [
        MotorhomeLabel::DesignatedMotorhome,
        MotorhomeLabel::CarParkingRisk,
        MotorhomeLabel::ParkClosest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MotorhomeLabel::DesignatedMotorhome => "designated_motorhome",
            MotorhomeLabel::CarParkingRisk => "car_parking_risk",
            MotorhomeLabel::ParkClosest => "park_closest",
        }
    }

    /// Options that leave the designated motorhome network carry a risk.
    pub fn is_risky(self) -> bool {
        self != MotorhomeLabel::DesignatedMotorhome
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotorhomeRequest {
    /// Must contain exactly one motorhome, located at the origin. Other
    /// vehicles are not used by the options.
    pub base: RoutingRequest,
    pub egress_modes: ModeSet,
}

impl MotorhomeRequest {
    pub fn new(base: RoutingRequest) -> Self {
        MotorhomeRequest {
            base,
            egress_modes: ModeSet::EMPTY.with(Mode::Walk).with(Mode::PublicTransport),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MotorhomeOption {
    pub label: MotorhomeLabel,
    pub route: Route,
    /// Where the motorhome is left.
    pub parking_node: NodeIdx,
    pub risk_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MotorhomeError {
    #[error("request has no motorhome")]
    MissingMotorhome,
    #[error("request has more than one motorhome")]
    SeveralMotorhomes,
    #[error("the motorhome must be parked at the origin")]
    MotorhomeNotAtOrigin,
    #[error("origin and destination coincide")]
    TrivialTrip,
    #[error("invalid request: {0}")]
    InvalidRequest(#[from] RequestError),
    #[error("no option reaches the destination")]
    Unreachable,
}

/// The routing request that realizes `label` for `request`.
pub fn option_request(request: &MotorhomeRequest, label: MotorhomeLabel) -> Result<RoutingRequest, MotorhomeError> {
    let base = &request.base;
    let mut motorhomes = base.vehicles.iter().filter(|v| v.kind == VehicleKind::Motorhome);
    let motorhome = motorhomes.next().ok_or(MotorhomeError::MissingMotorhome)?;
    if motorhomes.next().is_some() {
        return Err(MotorhomeError::SeveralMotorhomes);
    }
    if motorhome.location != base.origin {
        return Err(MotorhomeError::MotorhomeNotAtOrigin);
    }
    if base.origin == base.destination {
        return Err(MotorhomeError::TrivialTrip);
    }

    let mut vehicle = motorhome.clone();
    let egress = match label {
        MotorhomeLabel::DesignatedMotorhome => {
            vehicle.usage = VehicleUsage::native(VehicleKind::Motorhome);
            request.egress_modes
        }
        MotorhomeLabel::CarParkingRisk | MotorhomeLabel::ParkClosest => {
            vehicle.usage = VehicleUsage {
                network_mode: Mode::Car,
                park_as: VehicleKind::Car,
                enforce_dimensions: false,
            };
            if label == MotorhomeLabel::ParkClosest {
                ModeSet::EMPTY.with(Mode::Walk)
            } else {
                request.egress_modes
            }
        }
    };
    let mut allowed = egress.with(Mode::Motorhome);
    // Owned bikes and cars are not part of these options.
    allowed.remove(Mode::Bike);
    allowed.remove(Mode::Car);

    Ok(RoutingRequest {
        origin: base.origin,
        destination: base.destination,
        departure_time: base.departure_time,
        objective: Objective::FastestTime,
        allowed_modes: allowed,
        start_riding: Some(vehicle.id.clone()),
        vehicles: vec![vehicle],
        implicit_destination_parking: Vec::new(),
        switch_costs: base.switch_costs,
    })
}

/// Up to three options in label order; unreachable options are omitted.
pub fn three_option_routes<'a>(
    net: impl Into<Network<'a>>,
    request: &MotorhomeRequest,
    profile: &MultiplierProfile,
) -> Result<Vec<MotorhomeOption>, MotorhomeError> {
    let net = net.into();
    request.base.validate(net.graph())?;
    let requests = MotorhomeLabel::ALL
        .into_iter()
        .map(|label| option_request(request, label).map(|r| (label, r)))
        .collect::<Result<Vec<_>, _>>()?;

    let results: Vec<(MotorhomeLabel, Result<Route, SearchError>)> = requests
        .par_iter()
        .map(|(label, r)| (*label, search::shortest_route(net, r, profile)))
        .collect();

    let mut options = Vec::new();
    for (label, result) in results {
        match result {
            Ok(route) => {
                let parking_node = route
                    .legs
                    .iter()
                    .find(|l| l.mode == Mode::Motorhome)
                    .map(|l| l.end())
                    .expect("motorhome options start by driving");
                options.push(MotorhomeOption {
                    label,
                    route,
                    parking_node,
                    risk_flag: label.is_risky(),
                });
            }
            Err(SearchError::Unreachable) => {}
            Err(SearchError::InvalidRequest(e)) => return Err(e.into()),
            Err(SearchError::StateBudgetExceeded { .. }) => unreachable!("searches have no state budget"),
        }
    }
    if options.is_empty() {
        return Err(MotorhomeError::Unreachable);
    }
    Ok(options)
}
