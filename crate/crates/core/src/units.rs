//! Fixed-point cost units. Durations are summed in whole microseconds and
//! multipliers in thousandths, so path costs are exact integers: equal
//! routes tie exactly and scaling every multiplier by `c` scales the
//! perceived cost by exactly `c`.

use std::fmt;
use std::ops::{Add, AddAssign};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Micros(pub u64);

impl Micros {
    pub const ZERO: Micros = Micros(0);

    pub fn from_secs(secs: f64) -> Micros {
        Micros((secs * 1e6).round() as u64)
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1e6
    }
}

impl Add for Micros {
    type Output = Micros;
    fn add(self, rhs: Micros) -> Micros {
        Micros(self.0 + rhs.0)
    }
}

impl AddAssign for Micros {
    fn add_assign(&mut self, rhs: Micros) {
        self.0 += rhs.0;
    }
}

impl std::iter::Sum for Micros {
    fn sum<I: Iterator<Item = Micros>>(iter: I) -> Micros {
        Micros(iter.map(|m| m.0).sum())
    }
}

impl fmt::Display for Micros {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.3}s", self.as_secs_f64())
    }
}

/// Travel time weighted by a perception multiplier, in microseconds times
/// thousandths of a multiplier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PerceivedCost(pub u64);

impl PerceivedCost {
    pub const ZERO: PerceivedCost = PerceivedCost(0);

    pub fn weigh(time: Micros, multiplier_milli: u32) -> PerceivedCost {
        PerceivedCost(time.0 * multiplier_milli as u64)
    }

    /// Perceived seconds.
    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1e9
    }
}

impl Add for PerceivedCost {
    type Output = PerceivedCost;
    fn add(self, rhs: PerceivedCost) -> PerceivedCost {
        PerceivedCost(self.0 + rhs.0)
    }
}

impl AddAssign for PerceivedCost {
    fn add_assign(&mut self, rhs: PerceivedCost) {
        self.0 += rhs.0;
    }
}

/// Time to cover `length_m` at `speed_kmh`.
pub fn travel_time(length_m: f64, speed_kmh: f64) -> Micros {
    Micros((length_m * 3.6e6 / speed_kmh).round() as u64)
}
