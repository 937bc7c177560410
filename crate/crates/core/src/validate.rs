//! Independent check of a trajectory against the mission constraints.

use serde::{Deserialize, Serialize};

use crate::battery::stretch_budget;
use crate::geometry::{coverage_margin, segment_outage, Point};
use crate::map::{NetworkMap, POSITION_TOL};
use crate::model::UavParams;
use crate::trajectory::{Step, Terminal, Trajectory};

/// Relative slack on the per-stretch energy budget, for summation rounding.
pub const BATTERY_REL_TOL: f64 = 1e-9;

/// Points sampled per leg for the reported coverage margin.
const MARGIN_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Endpoints,
    Connectivity,
    Speed,
    Battery,
    Swap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub constraint: Constraint,
    /// Offending step index, if the violation is tied to one step.
    pub step: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub endpoints: bool,
    pub connectivity: bool,
    pub speeds: bool,
    pub battery: bool,
    pub swaps: bool,
    /// Smallest sampled depth inside coverage over all legs (m).
    pub worst_connectivity_margin: f64,
    /// Smallest unused energy over all stretches (J).
    pub min_battery_margin: f64,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn failed(&self, c: Constraint) -> bool {
        self.violations.iter().any(|v| v.constraint == c)
    }
}

struct Checker {
    violations: Vec<Violation>,
}

impl Checker {
    fn fail(&mut self, constraint: Constraint, step: Option<usize>, detail: String) {
        self.violations.push(Violation {
            constraint,
            step,
            detail,
        });
    }
}

fn near(a: Point, b: Point) -> bool {
    a.dist(b) <= POSITION_TOL
}

pub fn validate_trajectory(map: &NetworkMap, uav: &UavParams, traj: &Trajectory) -> ValidationReport {
    let mut ck = Checker { violations: Vec::new() };
    let mut here = map.u0;
    let mut worst_margin = f64::INFINITY;
    let mut min_battery = f64::INFINITY;
    let mut budget = uav.flight_budget();
    let mut used = 0.0;

    let close_stretch = |used: f64, budget: f64, step: Option<usize>, ck: &mut Checker, min_battery: &mut f64| {
        let margin = budget - used;
        *min_battery = min_battery.min(margin);
        if margin < -BATTERY_REL_TOL * uav.flight_budget() {
            ck.fail(
                Constraint::Battery,
                step,
                format!("stretch uses {used:.6} J of {budget:.6} J"),
            );
        }
    };

    for (k, step) in traj.steps.iter().enumerate() {
        match *step {
            Step::Flight(leg) => {
                if !near(leg.start, here) {
                    ck.fail(
                        Constraint::Endpoints,
                        Some(k),
                        format!(
                            "leg starts at ({}, {}), UAV is at ({}, {})",
                            leg.start.x, leg.start.y, here.x, here.y
                        ),
                    );
                }
                if !(leg.speed > 0.0 && uav.speeds.contains(leg.speed)) {
                    ck.fail(
                        Constraint::Speed,
                        Some(k),
                        format!("speed {} not in the speed set", leg.speed),
                    );
                }
                if segment_outage(leg.start, leg.end, map) {
                    ck.fail(Constraint::Connectivity, Some(k), "leg leaves coverage".into());
                }
                for s in 0..=MARGIN_SAMPLES {
                    let p = leg.start.lerp(leg.end, s as f64 / MARGIN_SAMPLES as f64);
                    worst_margin = worst_margin.min(coverage_margin(p, map));
                }
                if leg.speed > 0.0 {
                    used += leg.energy(uav);
                }
                here = leg.end;
            }
            Step::Swap(ev) => {
                let Some(cs) = map.charging.get(ev.station) else {
                    ck.fail(Constraint::Swap, Some(k), format!("no charging station {}", ev.station));
                    continue;
                };
                if !cs.is_available() {
                    ck.fail(
                        Constraint::Swap,
                        Some(k),
                        format!("station {} is unavailable", ev.station),
                    );
                }
                if !near(cs.position, here) {
                    ck.fail(
                        Constraint::Swap,
                        Some(k),
                        format!("swap away from station {}", ev.station),
                    );
                }
                if ev.dwell != cs.delay {
                    ck.fail(
                        Constraint::Swap,
                        Some(k),
                        format!("dwell {} differs from station delay {}", ev.dwell, cs.delay),
                    );
                }
                close_stretch(used, budget, Some(k), &mut ck, &mut min_battery);
                used = 0.0;
                budget = stretch_budget(map, uav, Terminal::Station(ev.station));
            }
        }
    }
    close_stretch(used, budget, None, &mut ck, &mut min_battery);
    if !near(here, map.uf) {
        ck.fail(Constraint::Endpoints, None, "trajectory does not end at uF".into());
    }

    let v = ck.violations;
    let ok = |c: Constraint| !v.iter().any(|x| x.constraint == c);
    ValidationReport {
        pass: v.is_empty(),
        endpoints: ok(Constraint::Endpoints),
        connectivity: ok(Constraint::Connectivity),
        speeds: ok(Constraint::Speed),
        battery: ok(Constraint::Battery),
        swaps: ok(Constraint::Swap),
        worst_connectivity_margin: worst_margin,
        min_battery_margin: min_battery,
        violations: v,
    }
}
