//! JSON documents read and written by the command line.
//!
//! Map (`schema: 1`):
//!
//! ```json
//! {
//!   "schema": 1,
//!   "d0": 1484.6,
//!   "stations": [{ "x": 0.0, "y": 0.0, "lambda": 120.0 }],
//!   "charging": [{ "x": 500.0, "y": 0.0, "tau": 100.0 }],
//!   "u0": { "x": -300.0, "y": 0.0 },
//!   "uf": { "x": 900.0, "y": 0.0 },
//!   "altitude": 100.0
//! }
//! ```
//!
//! `d0` may be replaced by a `comm` block of link parameters, from which the
//! radius is derived. `tau` may be the string `"inf"` for an unavailable
//! station. Optional: `surcharge` per charging station (J) and `cs_altitude`.

use std::fmt;

use covroute::model::base_coverage_radius;
use covroute::{
    BaseStation, ChargingStation, CommParams, FlightLeg, NetworkMap, Objective, PlanResult, Point, Step, SwapEvent,
    Terminal, Trajectory, UavParams,
};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

pub const SCHEMA: u32 = 1;

/// Swap delay: a number of seconds or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau(pub f64);

impl Serialize for Tau {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Tau {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Tau;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a non-negative number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Tau, E> {
                Ok(Tau(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Tau, E> {
                Ok(Tau(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Tau, E> {
                Ok(Tau(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Tau, E> {
                match v {
                    "inf" | "Infinity" => Ok(Tau(f64::INFINITY)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationDoc {
    pub x: f64,
    pub y: f64,
    /// Coverage offset (m).
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChargingDoc {
    pub x: f64,
    pub y: f64,
    pub tau: Tau,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub surcharge: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comm: Option<CommParams>,
    pub stations: Vec<StationDoc>,
    #[serde(default)]
    pub charging: Vec<ChargingDoc>,
    pub u0: Point,
    pub uf: Point,
    pub altitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs_altitude: Option<f64>,
}

fn invalid(field: &str, msg: impl fmt::Display) -> CliError {
    CliError::Invalid(format!("{field}: {msg}"))
}

/// Radius from whichever of `d0` or `comm` is present.
pub fn resolve_d0(d0: Option<f64>, comm: Option<&CommParams>) -> Result<f64, CliError> {
    match (d0, comm) {
        (Some(d), None) => Ok(d),
        (None, Some(c)) => {
            c.validate().map_err(|e| invalid("comm", e))?;
            base_coverage_radius(c).map_err(|e| invalid("comm", e))
        }
        (Some(_), Some(_)) => Err(invalid("d0", "give either d0 or comm, not both")),
        (None, None) => Err(invalid("d0", "missing; give d0 or a comm block")),
    }
}

impl MapDocument {
    pub fn to_map(&self) -> Result<NetworkMap, CliError> {
        if self.schema != SCHEMA {
            return Err(invalid("schema", format!("unsupported version {}", self.schema)));
        }
        let d0 = resolve_d0(self.d0, self.comm.as_ref())?;
        for (k, c) in self.charging.iter().enumerate() {
            if c.tau.0.is_nan() || c.tau.0 < 0.0 {
                return Err(invalid(&format!("charging[{k}].tau"), "must be >= 0 or \"inf\""));
            }
        }
        let map = NetworkMap {
            d0,
            stations: self
                .stations
                .iter()
                .map(|s| BaseStation {
                    position: Point::new(s.x, s.y),
                    offset: s.lambda,
                })
                .collect(),
            charging: self
                .charging
                .iter()
                .map(|c| ChargingStation {
                    energy_surcharge: c.surcharge,
                    ..ChargingStation::new(Point::new(c.x, c.y), c.tau.0)
                })
                .collect(),
            u0: self.u0,
            uf: self.uf,
            altitude: self.altitude,
            cs_altitude: self.cs_altitude.unwrap_or(self.altitude),
        };
        map.validate()?;
        Ok(map)
    }

    pub fn from_map(map: &NetworkMap) -> Self {
        MapDocument {
            schema: SCHEMA,
            d0: Some(map.d0),
            comm: None,
            stations: map
                .stations
                .iter()
                .map(|s| StationDoc {
                    x: s.position.x,
                    y: s.position.y,
                    lambda: s.offset,
                })
                .collect(),
            charging: map
                .charging
                .iter()
                .map(|c| ChargingDoc {
                    x: c.position.x,
                    y: c.position.y,
                    tau: Tau(c.delay),
                    surcharge: c.energy_surcharge,
                })
                .collect(),
            u0: map.u0,
            uf: map.uf,
            altitude: map.altitude,
            cs_altitude: (map.cs_altitude != map.altitude).then_some(map.cs_altitude),
        }
    }
}

/// Anything carrying a radius: a full map document or a bare `comm` block.
#[derive(Debug, Deserialize)]
pub struct CoverageInput {
    #[serde(default)]
    pub d0: Option<f64>,
    #[serde(default)]
    pub comm: Option<CommParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepDoc {
    Leg {
        start: Point,
        end: Point,
        speed: f64,
        time: f64,
        energy: f64,
    },
    Swap {
        station: usize,
        tau: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub time: f64,
    pub distance: f64,
    pub energy: f64,
    pub swaps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteDoc {
    pub from: Terminal,
    pub to: Terminal,
    pub connected: bool,
    /// Absent when no covered path exists.
    pub length: Option<f64>,
    pub v_max: Option<f64>,
    pub path: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema: u32,
    pub feasible: bool,
    /// `time`, `time-unlimited` or `energy`.
    pub objective: String,
    /// Seconds or joules; absent when infeasible.
    pub value: Option<f64>,
    pub totals: Totals,
    pub visits: Vec<Terminal>,
    pub steps: Vec<StepDoc>,
    #[serde(default)]
    pub local_routes: Vec<RouteDoc>,
}

impl PlanDocument {
    pub fn new(objective: &str, plan: &PlanResult, uav: &UavParams) -> Self {
        let t = &plan.trajectory;
        let steps = t
            .steps
            .iter()
            .map(|s| match *s {
                Step::Flight(l) => StepDoc::Leg {
                    start: l.start,
                    end: l.end,
                    speed: l.speed,
                    time: l.duration(),
                    energy: l.energy(uav),
                },
                Step::Swap(e) => StepDoc::Swap {
                    station: e.station,
                    tau: e.dwell,
                },
            })
            .collect();
        PlanDocument {
            schema: SCHEMA,
            feasible: plan.feasible,
            objective: objective.to_string(),
            value: plan.feasible.then_some(plan.value),
            totals: Totals {
                time: t.total_time(),
                distance: t.total_distance(),
                energy: t.total_energy(uav),
                swaps: plan.swap_count(),
            },
            visits: plan.visits.clone(),
            steps,
            local_routes: plan
                .local_routes
                .iter()
                .map(|r| RouteDoc {
                    from: r.from,
                    to: r.to,
                    connected: r.connected,
                    length: r.length.is_finite().then_some(r.length),
                    v_max: r.v_max,
                    path: r.path.clone(),
                })
                .collect(),
        }
    }

    pub fn trajectory(&self) -> Trajectory {
        Trajectory {
            steps: self
                .steps
                .iter()
                .map(|s| match *s {
                    StepDoc::Leg { start, end, speed, .. } => Step::Flight(FlightLeg { start, end, speed }),
                    StepDoc::Swap { station, tau } => Step::Swap(SwapEvent { station, dwell: tau }),
                })
                .collect(),
        }
    }
}

pub fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::Time => "time",
        Objective::Energy => "energy",
    }
}
