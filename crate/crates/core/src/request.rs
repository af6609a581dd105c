use chrono::{DateTime, FixedOffset};
use thiserror::Error;

use crate::graph::{Dimensions, Graph, Mode, ModeSet, NodeIdx, VehicleKind};
use crate::units::Micros;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    FastestTime,
    ShortestDistance,
}

/// Seconds spent on mode switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchCosts {
    pub board_s: f64,
    /// Indexed by [`VehicleKind::index`].
    pub pickup_s: [f64; 3],
    pub park_s: [f64; 3],
}

impl Default for SwitchCosts {
    fn default() -> Self {
        SwitchCosts {
            board_s: 30.0,
            pickup_s: [30.0, 60.0, 120.0],
            park_s: [30.0, 120.0, 300.0],
        }
    }
}

impl SwitchCosts {
    pub const ZERO: SwitchCosts = SwitchCosts {
        board_s: 0.0,
        pickup_s: [0.0; 3],
        park_s: [0.0; 3],
    };

    pub fn board(&self) -> Micros {
        Micros::from_secs(self.board_s)
    }

    pub fn pickup(&self, kind: VehicleKind) -> Micros {
        Micros::from_secs(self.pickup_s[kind.index()])
    }

    pub fn park(&self, kind: VehicleKind) -> Micros {
        Micros::from_secs(self.park_s[kind.index()])
    }

    fn is_valid(&self) -> bool {
        std::iter::once(self.board_s)
            .chain(self.pickup_s)
            .chain(self.park_s)
            .all(|s| s.is_finite() && s >= 0.0)
    }
}

/// How a vehicle is driven. The default drives a vehicle in its own mode,
/// within the network's size restrictions, and parks it where its kind is
/// accepted. The motorhome planner overrides this to drive a motorhome like
/// a car.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VehicleUsage {
    /// Edge speeds and permissions are read from this mode's annotation.
    pub network_mode: Mode,
    /// Parking facilities must accept this kind.
    pub park_as: VehicleKind,
    /// Check edge restrictions and parking capacities against the vehicle's
    /// dimensions.
    pub enforce_dimensions: bool,
}

impl VehicleUsage {
    pub fn native(kind: VehicleKind) -> Self {
        VehicleUsage {
            network_mode: kind.mode(),
            park_as: kind,
            enforce_dimensions: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OwnedVehicle {
    pub id: String,
    pub kind: VehicleKind,
    pub location: NodeIdx,
    pub dimensions: Dimensions,
    pub usage: VehicleUsage,
}

impl OwnedVehicle {
    /// A vehicle of `kind` with default dimensions, named after its kind.
    pub fn new(kind: VehicleKind, location: NodeIdx) -> Self {
        OwnedVehicle {
            id: kind.as_str().to_string(),
            kind,
            location,
            dimensions: kind.default_dimensions(),
            usage: VehicleUsage::native(kind),
        }
    }

    /// The mode a traveler riding this vehicle is in.
    pub fn mode(&self) -> Mode {
        self.kind.mode()
    }
}

pub const MAX_VEHICLES: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingRequest {
    pub origin: NodeIdx,
    pub destination: NodeIdx,
    /// Reported back with results; weights are static.
    pub departure_time: Option<DateTime<FixedOffset>>,
    pub objective: Objective,
    pub allowed_modes: ModeSet,
    pub vehicles: Vec<OwnedVehicle>,
    /// Kinds that may be left at the destination without a facility.
    pub implicit_destination_parking: Vec<VehicleKind>,
    pub switch_costs: SwitchCosts,
    /// Start the trip already riding this vehicle (by id). The vehicle must
    /// be located at the origin; its pickup time is still charged.
    pub start_riding: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RequestError {
    #[error("{0} is not a node of the graph")]
    UnknownNode(&'static str),
    #[error("no modes allowed")]
    NoModes,
    #[error("more than one {0} in the request")]
    DuplicateKind(VehicleKind),
    #[error("duplicate vehicle id {0:?}")]
    DuplicateVehicleId(String),
    #[error("at most {MAX_VEHICLES} vehicles are supported")]
    TooManyVehicles,
    #[error("vehicle {0:?} is located outside the graph")]
    VehicleOffGraph(String),
    #[error("start vehicle {0:?} is not in the request")]
    UnknownStartVehicle(String),
    #[error("start vehicle {0:?} is not at the origin")]
    StartVehicleNotAtOrigin(String),
    #[error("switch costs must be finite and non-negative")]
    InvalidSwitchCosts,
    #[error("motorhome never qualifies for implicit destination parking")]
    ImplicitMotorhomeParking,
}

impl RoutingRequest {
    pub fn new(origin: NodeIdx, destination: NodeIdx, allowed_modes: ModeSet) -> Self {
        RoutingRequest {
            origin,
            destination,
            departure_time: None,
            objective: Objective::FastestTime,
            allowed_modes,
            vehicles: Vec::new(),
            implicit_destination_parking: vec![VehicleKind::Bike, VehicleKind::Car],
            switch_costs: SwitchCosts::default(),
            start_riding: None,
        }
    }

    pub fn with_vehicle(mut self, kind: VehicleKind, location: NodeIdx) -> Self {
        self.vehicles.push(OwnedVehicle::new(kind, location));
        self
    }

    pub fn with_switch_costs(mut self, costs: SwitchCosts) -> Self {
        self.switch_costs = costs;
        self
    }

    pub fn with_objective(mut self, objective: Objective) -> Self {
        self.objective = objective;
        self
    }

    pub fn vehicle(&self, id: &str) -> Option<&OwnedVehicle> {
        self.vehicles.iter().find(|v| v.id == id)
    }

    pub fn validate(&self, graph: &Graph) -> Result<(), RequestError> {
        let n = graph.node_count();
        if self.origin.index() >= n {
            return Err(RequestError::UnknownNode("origin"));
        }
        if self.destination.index() >= n {
            return Err(RequestError::UnknownNode("destination"));
        }
        if self.allowed_modes.is_empty() {
            return Err(RequestError::NoModes);
        }
        if self.vehicles.len() > MAX_VEHICLES {
            return Err(RequestError::TooManyVehicles);
        }
        for (i, v) in self.vehicles.iter().enumerate() {
            if v.location.index() >= n {
                return Err(RequestError::VehicleOffGraph(v.id.clone()));
            }
            for other in &self.vehicles[..i] {
                if other.kind == v.kind {
                    return Err(RequestError::DuplicateKind(v.kind));
                }
                if other.id == v.id {
                    return Err(RequestError::DuplicateVehicleId(v.id.clone()));
                }
            }
        }
        if let Some(id) = &self.start_riding {
            let v = self
                .vehicle(id)
                .ok_or_else(|| RequestError::UnknownStartVehicle(id.clone()))?;
            if v.location != self.origin {
                return Err(RequestError::StartVehicleNotAtOrigin(id.clone()));
            }
        }
        if self.implicit_destination_parking.contains(&VehicleKind::Motorhome) {
            return Err(RequestError::ImplicitMotorhomeParking);
        }
        if !self.switch_costs.is_valid() {
            return Err(RequestError::InvalidSwitchCosts);
        }
        Ok(())
    }
}
