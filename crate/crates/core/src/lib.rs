//! Trajectory planning for a cellular-connected rotary-wing UAV.
//!
//! The UAV must stay inside the union of base-station coverage disks and may
//! swap batteries at charging stations. Planning reduces to shortest paths on
//! graphs whose vertices are coverage-boundary intersection points: a local
//! level between every pair of stations and a global level over stations.

pub mod battery;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod map;
pub mod mapgen;
pub mod model;
pub mod oracle;
pub mod payload;
pub mod planner;
pub mod trajectory;
pub mod validate;

pub use battery::{chk_sp, plan_min_energy, plan_min_time};
pub use error::{Error, Result};
pub use geometry::{CoverageInterval, Point};
pub use map::{BaseStation, ChargingStation, NetworkMap};
pub use model::{BatteryParams, CommParams, PowerParams, SpeedSet, UavParams};
pub use payload::{max_payload, PayloadQuery, PayloadResult};
pub use planner::plan_unlimited;
pub use trajectory::{FlightLeg, LocalRoute, Objective, PlanResult, Step, SwapEvent, Terminal, Trajectory};
pub use validate::{validate_trajectory, ValidationReport};
