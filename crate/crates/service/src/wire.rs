//! JSON request documents and their conversion into engine requests.

use std::collections::BTreeMap;

use chrono::{DateTime, FixedOffset, Utc};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use intermodal_core::graph::{snap, SnapError};
use intermodal_core::motorhome::MotorhomeRequest;
use intermodal_core::request::RequestError;
use intermodal_core::{
    Dimensions, Graph, Mode, ModeSet, MultiplierProfile, NodeIdx, Objective, OwnedVehicle, ProfileFamily,
    RoutingRequest, SpeedOverride, SwitchCosts, VehicleKind,
};

use crate::error::ApiError;

/// A location given either as coordinates, snapped to the nearest node, or
/// as a node id.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Place {
    Coordinates(Coordinates),
    Node(NodeRef),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coordinates {
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRef {
    pub node: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveDoc {
    #[default]
    FastestTime,
    ShortestDistance,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimensionsDoc {
    pub width_m: f64,
    pub length_m: f64,
    pub height_m: f64,
    pub weight_kg: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VehicleDoc {
    /// Defaults to the kind name.
    #[serde(default)]
    pub id: Option<String>,
    pub kind: VehicleKind,
    pub location: Place,
    #[serde(default)]
    pub dimensions: Option<DimensionsDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub id: String,
    pub multipliers: BTreeMap<Mode, f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwitchCostsDoc {
    pub board_s: f64,
    pub pickup_s: BTreeMap<VehicleKind, f64>,
    pub park_s: BTreeMap<VehicleKind, f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteRequestDoc {
    pub origin: Place,
    pub destination: Place,
    #[serde(default)]
    pub departure_time: Option<DateTime<FixedOffset>>,
    #[serde(default)]
    pub objective: ObjectiveDoc,
    /// All modes when absent.
    #[serde(default)]
    pub allowed_modes: Option<Vec<Mode>>,
    #[serde(default)]
    pub vehicles: Vec<VehicleDoc>,
    #[serde(default)]
    pub profile_family: Option<Vec<ProfileDoc>>,
    #[serde(default)]
    pub switch_costs: Option<SwitchCostsDoc>,
    #[serde(default)]
    pub implicit_destination_parking: Option<Vec<VehicleKind>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorhomeRequestDoc {
    pub origin: Place,
    pub destination: Place,
    #[serde(default)]
    pub departure_time: Option<DateTime<FixedOffset>>,
    /// Walk and public transport when absent.
    #[serde(default)]
    pub egress_modes: Option<Vec<Mode>>,
    /// The motorhome, plus any other vehicles, which the options ignore.
    pub vehicles: Vec<VehicleDoc>,
    #[serde(default)]
    pub profile: Option<ProfileDoc>,
    #[serde(default)]
    pub switch_costs: Option<SwitchCostsDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideDoc {
    pub from: String,
    pub to: String,
    pub mode: Mode,
    pub factor: f64,
    pub expiry: DateTime<Utc>,
}

/// Parses JSON, reporting the path of the offending field on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, ApiError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = (path != ".").then_some(path);
        ApiError::invalid(field, e.into_inner().to_string())
    })
}

fn resolve_place(graph: &Graph, place: &Place, field: &str) -> Result<NodeIdx, ApiError> {
    match place {
        Place::Node(NodeRef { node }) => graph
            .node_idx(node)
            .ok_or_else(|| ApiError::invalid(Some(format!("{field}.node")), format!("unknown node {node:?}"))),
        Place::Coordinates(Coordinates { lat, lon }) => snap(graph, *lat, *lon).map_err(|e| {
            let message = match e {
                SnapError::EmptyGraph => "graph has no nodes".to_string(),
                SnapError::TooFar { nearest, distance_m } => {
                    format!("no node within 500 m; nearest is {nearest:?} at {distance_m:.1} m")
                }
            };
            ApiError::invalid(Some(field.to_string()), message)
        }),
    }
}

fn mode_set(modes: &[Mode]) -> ModeSet {
    modes.iter().copied().collect()
}

fn vehicles(graph: &Graph, docs: &[VehicleDoc]) -> Result<Vec<OwnedVehicle>, ApiError> {
    docs.iter()
        .enumerate()
        .map(|(i, v)| {
            let location = resolve_place(graph, &v.location, &format!("vehicles[{i}].location"))?;
            let mut vehicle = OwnedVehicle::new(v.kind, location);
            if let Some(id) = &v.id {
                vehicle.id = id.clone();
            }
            if let Some(d) = &v.dimensions {
                let dims = Dimensions {
                    width_m: d.width_m,
                    length_m: d.length_m,
                    height_m: d.height_m,
                    weight_kg: d.weight_kg,
                };
                if ![dims.width_m, dims.length_m, dims.height_m, dims.weight_kg]
                    .iter()
                    .all(|x| x.is_finite() && *x > 0.0)
                {
                    return Err(ApiError::invalid(
                        Some(format!("vehicles[{i}].dimensions")),
                        "dimensions must be positive",
                    ));
                }
                vehicle.dimensions = dims;
            }
            Ok(vehicle)
        })
        .collect()
}

fn switch_costs(doc: &Option<SwitchCostsDoc>) -> SwitchCosts {
    let mut costs = SwitchCosts::default();
    if let Some(doc) = doc {
        costs.board_s = doc.board_s;
        for (kind, s) in &doc.pickup_s {
            costs.pickup_s[kind.index()] = *s;
        }
        for (kind, s) in &doc.park_s {
            costs.park_s[kind.index()] = *s;
        }
    }
    costs
}

/// Field path of a validation failure, for error reporting.
fn request_error(e: RequestError, docs: &[VehicleDoc], ids: &[String]) -> ApiError {
    let vehicle_field = |id: &str| {
        ids.iter()
            .position(|x| x == id)
            .filter(|&i| i < docs.len())
            .map(|i| format!("vehicles[{i}]"))
    };
    let field = match &e {
        RequestError::UnknownNode(which) => Some(which.to_string()),
        RequestError::NoModes => Some("allowed_modes".to_string()),
        RequestError::DuplicateKind(_) | RequestError::TooManyVehicles => Some("vehicles".to_string()),
        RequestError::DuplicateVehicleId(id) | RequestError::VehicleOffGraph(id) => vehicle_field(id),
        RequestError::UnknownStartVehicle(_) | RequestError::StartVehicleNotAtOrigin(_) => Some("vehicles".to_string()),
        RequestError::InvalidSwitchCosts => Some("switch_costs".to_string()),
        RequestError::ImplicitMotorhomeParking => Some("implicit_destination_parking".to_string()),
    };
    ApiError::invalid(field, e.to_string())
}

pub fn profile(doc: &ProfileDoc) -> Result<MultiplierProfile, String> {
    MultiplierProfile::from_map(doc.id.clone(), &doc.multipliers).map_err(|e| e.to_string())
}

/// A family led by the neutral profile is used as given; any other list is
/// a traveler's personal family, searched without the neutral profile.
pub fn family(docs: &[ProfileDoc], field: Option<&str>) -> Result<ProfileFamily, ApiError> {
    let at = |i: usize| field.map(|f| format!("{f}[{i}]"));
    let profiles = docs
        .iter()
        .enumerate()
        .map(|(i, d)| profile(d).map_err(|m| ApiError::invalid(at(i), m)))
        .collect::<Result<Vec<_>, _>>()?;
    let family = match profiles.first() {
        Some(first) if first.is_neutral() => ProfileFamily::new(profiles),
        _ => ProfileFamily::personal(profiles),
    };
    family.map_err(|e| ApiError::invalid(field.map(str::to_string), e.to_string()))
}

impl RouteRequestDoc {
    pub fn to_request(&self, graph: &Graph) -> Result<RoutingRequest, ApiError> {
        let origin = resolve_place(graph, &self.origin, "origin")?;
        let destination = resolve_place(graph, &self.destination, "destination")?;
        let allowed = self.allowed_modes.as_deref().map(mode_set).unwrap_or(ModeSet::ALL);
        let mut request = RoutingRequest::new(origin, destination, allowed);
        request.departure_time = self.departure_time;
        request.objective = match self.objective {
            ObjectiveDoc::FastestTime => Objective::FastestTime,
            ObjectiveDoc::ShortestDistance => Objective::ShortestDistance,
        };
        request.vehicles = vehicles(graph, &self.vehicles)?;
        request.switch_costs = switch_costs(&self.switch_costs);
        if let Some(kinds) = &self.implicit_destination_parking {
            request.implicit_destination_parking = kinds.clone();
        }
        let ids: Vec<String> = request.vehicles.iter().map(|v| v.id.clone()).collect();
        request
            .validate(graph)
            .map_err(|e| request_error(e, &self.vehicles, &ids))?;
        Ok(request)
    }
}

impl MotorhomeRequestDoc {
    pub fn to_request(&self, graph: &Graph) -> Result<(MotorhomeRequest, MultiplierProfile), ApiError> {
        let origin = resolve_place(graph, &self.origin, "origin")?;
        let destination = resolve_place(graph, &self.destination, "destination")?;
        let mut base = RoutingRequest::new(origin, destination, ModeSet::ALL);
        base.departure_time = self.departure_time;
        base.vehicles = vehicles(graph, &self.vehicles)?;
        base.switch_costs = switch_costs(&self.switch_costs);
        let ids: Vec<String> = base.vehicles.iter().map(|v| v.id.clone()).collect();
        base.validate(graph)
            .map_err(|e| request_error(e, &self.vehicles, &ids))?;
        let mut request = MotorhomeRequest::new(base);
        if let Some(modes) = &self.egress_modes {
            request.egress_modes = mode_set(modes);
            if request.egress_modes.is_empty() {
                return Err(ApiError::invalid(Some("egress_modes".into()), "no egress modes"));
            }
        }
        let profile = match &self.profile {
            Some(doc) => profile(doc).map_err(|m| ApiError::invalid(Some("profile".into()), m))?,
            None => MultiplierProfile::neutral(),
        };
        Ok((request, profile))
    }
}

impl OverrideDoc {
    pub fn to_override(&self) -> SpeedOverride {
        SpeedOverride {
            from: self.from.clone(),
            to: self.to.clone(),
            mode: self.mode,
            factor: self.factor,
            expiry: self.expiry,
        }
    }
}
