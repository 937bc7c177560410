//! Planner outputs: trajectories, per-pair local routes and plan results.

use serde::{Deserialize, Serialize};

use crate::geometry::Point;
use crate::model::UavParams;

/// Straight flight at constant speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlightLeg {
    pub start: Point,
    pub end: Point,
    pub speed: f64,
}

impl FlightLeg {
    pub fn length(&self) -> f64 {
        self.start.dist(self.end)
    }

    pub fn duration(&self) -> f64 {
        self.length() / self.speed
    }

    /// Battery energy drawn over the leg.
    pub fn energy(&self, uav: &UavParams) -> f64 {
        self.duration() * uav.power_at(self.speed) / uav.battery.eta
    }
}

/// Battery swap at charging station `station`, lasting `dwell` seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapEvent {
    pub station: usize,
    pub dwell: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    Flight(FlightLeg),
    Swap(SwapEvent),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<Step>,
}

impl Trajectory {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn legs(&self) -> impl Iterator<Item = &FlightLeg> {
        self.steps.iter().filter_map(|s| match s {
            Step::Flight(l) => Some(l),
            Step::Swap(_) => None,
        })
    }

    pub fn swaps(&self) -> impl Iterator<Item = &SwapEvent> {
        self.steps.iter().filter_map(|s| match s {
            Step::Swap(e) => Some(e),
            Step::Flight(_) => None,
        })
    }

    pub fn total_distance(&self) -> f64 {
        self.legs().map(FlightLeg::length).sum()
    }

    /// Flight time plus swap dwell.
    pub fn total_time(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Flight(l) => l.duration(),
                Step::Swap(e) => e.dwell,
            })
            .sum()
    }

    /// Propulsion energy drawn from the batteries over all legs.
    pub fn total_energy(&self, uav: &UavParams) -> f64 {
        self.legs().map(|l| l.energy(uav)).sum()
    }

    /// Polyline vertices: start of the first leg followed by every leg end.
    pub fn waypoints(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for leg in self.legs() {
            if out.is_empty() {
                out.push(leg.start);
            }
            out.push(leg.end);
        }
        out
    }

    /// Appends legs along `path` at `speed`, one per consecutive pair.
    pub fn push_polyline(&mut self, path: &[Point], speed: f64) {
        for w in path.windows(2) {
            self.steps.push(Step::Flight(FlightLeg {
                start: w[0],
                end: w[1],
                speed,
            }));
        }
    }
}

/// Endpoint of a local route: a charging station, the start or the goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    Station(usize),
    Start,
    Goal,
}

/// Shortest covered path between two terminals, with the fastest speed that
/// crosses it on one battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalRoute {
    pub from: Terminal,
    pub to: Terminal,
    /// Both terminals lie in one connected piece of the coverage map.
    pub connected: bool,
    /// Path length (m); infinite when no covered path was found.
    pub length: f64,
    pub path: Vec<Point>,
    /// Fastest admissible speed covering `length` on one battery.
    pub v_max: Option<f64>,
}

impl LocalRoute {
    pub fn has_path(&self) -> bool {
        self.connected && self.length.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Time,
    Energy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub feasible: bool,
    pub objective: Objective,
    /// Mission time (s) or energy (J); infinite when infeasible.
    pub value: f64,
    pub trajectory: Trajectory,
    /// Terminals visited in order, starting with `Start` and ending with `Goal`.
    pub visits: Vec<Terminal>,
    pub local_routes: Vec<LocalRoute>,
}

impl PlanResult {
    pub fn infeasible(objective: Objective, local_routes: Vec<LocalRoute>) -> Self {
        PlanResult {
            feasible: false,
            objective,
            value: f64::INFINITY,
            trajectory: Trajectory::default(),
            visits: Vec::new(),
            local_routes,
        }
    }

    pub fn swap_count(&self) -> usize {
        self.trajectory.swaps().count()
    }
}
