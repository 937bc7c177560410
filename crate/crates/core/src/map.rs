use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Base station: horizontal position and coverage offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseStation {
    pub position: Point,
    /// Reduction of the base coverage radius (m).
    pub offset: f64,
}

/// Battery-swap station. An infinite `delay` marks the station unavailable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChargingStation {
    pub position: Point,
    /// Total dwell for a swap (s).
    pub delay: f64,
    /// Energy (J) spent climbing back to cruise altitude after a swap. It is
    /// taken from the fresh battery before the next stretch.
    #[serde(default)]
    pub energy_surcharge: f64,
}

impl ChargingStation {
    pub fn new(position: Point, delay: f64) -> Self {
        ChargingStation {
            position,
            delay,
            energy_surcharge: 0.0,
        }
    }

    pub fn is_available(&self) -> bool {
        self.delay.is_finite()
    }
}

/// Everything the planners need to know about the environment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkMap {
    /// Base coverage radius (m).
    pub d0: f64,
    pub stations: Vec<BaseStation>,
    pub charging: Vec<ChargingStation>,
    pub u0: Point,
    pub uf: Point,
    /// UAV cruise altitude (m).
    pub altitude: f64,
    /// Charging station altitude (m).
    pub cs_altitude: f64,
}

/// Distinct charging stations must be at least this far apart.
pub const POSITION_TOL: f64 = 1e-6;

impl NetworkMap {
    pub fn validate(&self) -> Result<()> {
        if !(self.d0.is_finite() && self.d0 > 0.0) {
            return Err(Error::InvalidMap(format!("d0 must be finite and > 0, got {}", self.d0)));
        }
        if self.stations.is_empty() {
            return Err(Error::InvalidMap("at least one base station is required".into()));
        }
        for (m, bs) in self.stations.iter().enumerate() {
            if !bs.position.is_finite() {
                return Err(Error::InvalidMap(format!("stations[{m}] position is not finite")));
            }
            if !(bs.offset >= 0.0 && bs.offset <= self.d0) {
                return Err(Error::InvalidMap(format!(
                    "stations[{m}] offset {} outside [0, d0]",
                    bs.offset
                )));
            }
        }
        for (n, cs) in self.charging.iter().enumerate() {
            if !cs.position.is_finite() {
                return Err(Error::InvalidMap(format!("charging[{n}] position is not finite")));
            }
            if cs.delay.is_nan() || cs.delay < 0.0 {
                return Err(Error::InvalidMap(format!("charging[{n}] delay must be >= 0")));
            }
            if !(cs.energy_surcharge.is_finite() && cs.energy_surcharge >= 0.0) {
                return Err(Error::InvalidMap(format!(
                    "charging[{n}] energy_surcharge must be finite and >= 0"
                )));
            }
            for (k, other) in self.charging[..n].iter().enumerate() {
                if cs.position.dist(other.position) <= POSITION_TOL {
                    return Err(Error::InvalidMap(format!(
                        "charging[{k}] and charging[{n}] share a position"
                    )));
                }
            }
        }
        if !self.u0.is_finite() || !self.uf.is_finite() {
            return Err(Error::InvalidMap("u0 and uf must be finite".into()));
        }
        if !(self.altitude.is_finite() && self.cs_altitude.is_finite() && self.cs_altitude <= self.altitude) {
            return Err(Error::InvalidMap(
                "need finite altitudes with cs_altitude <= altitude".into(),
            ));
        }
        Ok(())
    }

    /// Effective coverage radius of station `m`.
    pub fn radius(&self, m: usize) -> f64 {
        (self.d0 - self.stations[m].offset).max(0.0)
    }

    /// `(center, effective radius)` for every base station.
    pub fn disks(&self) -> impl Iterator<Item = (Point, f64)> + '_ {
        (0..self.stations.len()).map(move |m| (self.stations[m].position, self.radius(m)))
    }

    /// Marks charging station `n` unavailable.
    pub fn without_charging(&self, n: usize) -> NetworkMap {
        let mut out = self.clone();
        out.charging[n].delay = f64::INFINITY;
        out
    }
}
