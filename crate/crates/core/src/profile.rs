use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::Mode;

pub const MIN_MULTIPLIER: f64 = 1.0;
pub const MAX_MULTIPLIER: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("profile {profile:?}: multiplier for {mode} is {value}, must lie in [1, 100]")]
    OutOfRange { profile: String, mode: Mode, value: f64 },
    #[error("profile {profile:?}: no multiplier for {mode}")]
    Missing { profile: String, mode: Mode },
    #[error("profile id must not be empty")]
    EmptyId,
}

/// Per-mode travel time perception multipliers. Edge, wait and switch times
/// spent in a mode are multiplied by that mode's factor.
///
/// Factors are stored in thousandths, so values are effectively rounded to
/// three decimals.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierProfile {
    id: String,
    multipliers: [f64; 5],
    milli: [u32; 5],
}

impl MultiplierProfile {
    pub fn new(id: impl Into<String>, multipliers: [f64; 5]) -> Result<Self, ProfileError> {
        let id = id.into();
        if id.is_empty() {
            return Err(ProfileError::EmptyId);
        }
        let mut milli = [0u32; 5];
        for mode in Mode::ALL {
            let value = multipliers[mode.index()];
            if !(MIN_MULTIPLIER..=MAX_MULTIPLIER).contains(&value) {
                return Err(ProfileError::OutOfRange {
                    profile: id,
                    mode,
                    value,
                });
            }
            milli[mode.index()] = (value * 1000.0).round() as u32;
        }
        Ok(MultiplierProfile { id, multipliers, milli })
    }

    /// Builds a profile from a map that must name every mode.
    pub fn from_map(id: impl Into<String>, map: &BTreeMap<Mode, f64>) -> Result<Self, ProfileError> {
        let id = id.into();
        let mut values = [0.0; 5];
        for mode in Mode::ALL {
            values[mode.index()] = *map.get(&mode).ok_or_else(|| ProfileError::Missing {
                profile: id.clone(),
                mode,
            })?;
        }
        Self::new(id, values)
    }

    /// Same factor for every mode.
    pub fn uniform(id: impl Into<String>, factor: f64) -> Result<Self, ProfileError> {
        Self::new(id, [factor; 5])
    }

    /// All factors 1.
    pub fn neutral() -> Self {
        Self::uniform("neutral", 1.0).expect("1 is in range")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn multiplier(&self, mode: Mode) -> f64 {
        self.multipliers[mode.index()]
    }

    pub fn multipliers(&self) -> &[f64; 5] {
        &self.multipliers
    }

    pub(crate) fn milli(&self, mode: Mode) -> u32 {
        self.milli[mode.index()]
    }

    pub fn is_neutral(&self) -> bool {
        self.milli.iter().all(|&m| m == 1000)
    }

    pub fn to_map(&self) -> BTreeMap<Mode, f64> {
        Mode::ALL.into_iter().map(|m| (m, self.multiplier(m))).collect()
    }
}
