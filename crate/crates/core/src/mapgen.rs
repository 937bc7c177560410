//! Seeded random maps: stations, charging stations and endpoints uniform over
//! a square, offsets uniform on `[0, max_offset]`. Draws the planner cannot
//! solve are rejected.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::battery::plan_min_time;
use crate::error::{Error, Result};
use crate::geometry::{coverage_connected, Point};
use crate::map::{BaseStation, ChargingStation, NetworkMap};
use crate::model::{base_coverage_radius, CommParams, UavParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub seed: u64,
    pub stations: usize,
    pub charging: usize,
    /// Side of the square region (m).
    pub size: f64,
    pub max_offset: f64,
    pub delay: f64,
    pub d0: f64,
    pub altitude: f64,
    /// Draws with u0 and uF closer than this are rejected (m).
    #[serde(default)]
    pub min_trip: f64,
    pub max_attempts: u32,
}

impl MapSpec {
    pub fn new(seed: u64, stations: usize, charging: usize, size: f64) -> Self {
        MapSpec {
            seed,
            stations,
            charging,
            size,
            max_offset: 800.0,
            delay: 100.0,
            d0: base_coverage_radius(&CommParams::reference()).expect("reference link budget has coverage"),
            altitude: 100.0,
            min_trip: 0.0,
            max_attempts: 100_000,
        }
    }
}

fn draw(spec: &MapSpec, rng: &mut ChaCha8Rng) -> NetworkMap {
    let point = |rng: &mut ChaCha8Rng| Point::new(rng.gen_range(0.0..spec.size), rng.gen_range(0.0..spec.size));
    let stations = (0..spec.stations)
        .map(|_| BaseStation {
            position: point(rng),
            offset: rng.gen_range(0.0..=spec.max_offset),
        })
        .collect();
    let charging = (0..spec.charging)
        .map(|_| ChargingStation::new(point(rng), spec.delay))
        .collect();
    let u0 = point(rng);
    let uf = point(rng);
    NetworkMap {
        d0: spec.d0,
        stations,
        charging,
        u0,
        uf,
        altitude: spec.altitude,
        cs_altitude: spec.altitude,
    }
}

/// First draw from `spec.seed` on which minimum-time planning with `uav`
/// succeeds.
pub fn generate_map(spec: &MapSpec, uav: &UavParams) -> Result<NetworkMap> {
    if spec.stations == 0 {
        return Err(Error::param("stations", "need at least one base station"));
    }
    if !(spec.size.is_finite() && spec.size > 0.0) {
        return Err(Error::param(
            "size",
            format!("must be finite and > 0, got {}", spec.size),
        ));
    }
    if !(spec.max_offset >= 0.0 && spec.max_offset <= spec.d0) {
        return Err(Error::param("max_offset", "must lie in [0, d0]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.max_attempts {
        let map = draw(spec, &mut rng);
        if map.u0.dist(map.uf) < spec.min_trip || map.validate().is_err() || !coverage_connected(map.u0, map.uf, &map) {
            continue;
        }
        if plan_min_time(&map, uav)?.feasible {
            return Ok(map);
        }
    }
    Err(Error::param(
        "seed",
        format!("no feasible map in {} draws", spec.max_attempts),
    ))
}
