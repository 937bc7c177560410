//! Desk-scale experiments: one-variable sweeps over a seeded map and a
//! runtime probe over map sizes. Both produce tab-separated tables.

use std::fmt::Write;
use std::path::PathBuf;
use std::time::Instant;

use covroute::mapgen::{generate_map, MapSpec};
use covroute::{plan_min_energy, plan_min_time, NetworkMap, Objective, PlanResult, SpeedSet, UavParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Core(#[from] covroute::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;

/// The variable a sweep moves. Numeric values must be finite and strictly
/// ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variable", rename_all = "snake_case")]
pub enum Sweep {
    /// Swap delay of one charging station (s).
    Tau { station: usize, values: Vec<f64> },
    /// Battery weight (kg).
    W2 { values: Vec<f64> },
    /// Payload weight (kg).
    W3 { values: Vec<f64> },
    /// Single cruise speed, replacing the speed set (m/s).
    VFix { values: Vec<f64> },
    /// Charging stations taken out of service, one set per point.
    Unavailable { sets: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub map: MapSpec,
    #[serde(default = "UavParams::reference")]
    pub uav: UavParams,
    pub sweep: Sweep,
    pub objective: Objective,
    /// Where the binary writes the table; stdout when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub point: String,
    pub feasible: bool,
    /// Mission time (s) or energy (J); `None` when infeasible.
    pub value: Option<f64>,
    pub swaps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub variable: &'static str,
    pub rows: Vec<SweepRow>,
}

fn ascending(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(BenchError::Sweep("no sweep points".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(BenchError::Sweep("values must be finite".into()));
    }
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::Sweep("values must be strictly ascending".into()));
    }
    Ok(())
}

fn plan(map: &NetworkMap, uav: &UavParams, objective: Objective) -> Result<PlanResult> {
    Ok(match objective {
        Objective::Time => plan_min_time(map, uav)?,
        Objective::Energy => plan_min_energy(map, uav)?,
    })
}

fn row(point: String, p: &PlanResult) -> SweepRow {
    SweepRow {
        point,
        feasible: p.feasible,
        value: p.feasible.then_some(p.value),
        swaps: p.swap_count(),
    }
}

/// One planner call per sweep point on the map drawn from `spec.map`.
/// Infeasible points are recorded, not fatal.
pub fn sweep(spec: &ExperimentSpec) -> Result<SweepTable> {
    let map = generate_map(&spec.map, &spec.uav)?;
    sweep_on(&map, &spec.uav, &spec.sweep, spec.objective)
}

/// [`sweep`] on a given map.
pub fn sweep_on(map: &NetworkMap, uav: &UavParams, sweep: &Sweep, objective: Objective) -> Result<SweepTable> {
    let mut rows = Vec::new();
    let variable = match sweep {
        Sweep::Tau { station, values } => {
            ascending(values)?;
            if *station >= map.charging.len() {
                return Err(BenchError::Sweep(format!("no charging station {station}")));
            }
            for &v in values {
                if v < 0.0 {
                    return Err(BenchError::Sweep("delays must be >= 0".into()));
                }
                let mut m = map.clone();
                m.charging[*station].delay = v;
                rows.push(row(v.to_string(), &plan(&m, uav, objective)?));
            }
            "tau"
        }
        Sweep::W2 { values } => {
            ascending(values)?;
            for &v in values {
                let u = UavParams { w2: v, ..uav.clone() };
                rows.push(row(v.to_string(), &plan(map, &u, objective)?));
            }
            "w2"
        }
        Sweep::W3 { values } => {
            ascending(values)?;
            for &v in values {
                rows.push(row(v.to_string(), &plan(map, &uav.with_payload(v), objective)?));
            }
            "w3"
        }
        Sweep::VFix { values } => {
            ascending(values)?;
            for &v in values {
                let u = uav.with_speeds(SpeedSet::new(vec![0.0, v])?);
                rows.push(row(v.to_string(), &plan(map, &u, objective)?));
            }
            "v_fix"
        }
        Sweep::Unavailable { sets } => {
            if sets.is_empty() {
                return Err(BenchError::Sweep("no sweep points".into()));
            }
            for set in sets {
                let mut m = map.clone();
                for &n in set {
                    if n >= map.charging.len() {
                        return Err(BenchError::Sweep(format!("no charging station {n}")));
                    }
                    m = m.without_charging(n);
                }
                let label = if set.is_empty() {
                    "-".to_string()
                } else {
                    set.iter().map(usize::to_string).collect::<Vec<_>>().join("+")
                };
                rows.push(row(label, &plan(&m, uav, objective)?));
            }
            "unavailable"
        }
    };
    Ok(SweepTable { variable, rows })
}

impl SweepTable {
    pub fn to_tsv(&self) -> String {
        let mut s = format!("{}\tfeasible\tvalue\tswaps\n", self.variable);
        for r in &self.rows {
            let value = r.value.map_or_else(|| "-".to_string(), |v| v.to_string());
            let _ = writeln!(s, "{}\t{}\t{}\t{}", r.point, r.feasible, value, r.swaps);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub stations: usize,
    pub charging: usize,
    /// Median wall-clock time of `plan_min_time` (s).
    pub median: f64,
    /// Local routes computed, one per ordered terminal pair.
    pub local_routes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    pub seed: u64,
    pub size: f64,
    pub repetitions: usize,
}

/// Median planning time over `repetitions` maps per (M, N) size.
pub fn scaling_probe(ms: &[usize], ns: &[usize], probe: ProbeSpec, uav: &UavParams) -> Result<Vec<ScalingRow>> {
    if probe.repetitions == 0 {
        return Err(BenchError::Sweep("repetitions must be positive".into()));
    }
    let mut rows = Vec::new();
    for &n in ns {
        for &m in ms {
            let mut times = Vec::with_capacity(probe.repetitions);
            let mut routes = 0;
            for r in 0..probe.repetitions {
                let map = generate_map(&MapSpec::new(probe.seed + r as u64, m, n, probe.size), uav)?;
                let t = Instant::now();
                let p = plan_min_time(&map, uav)?;
                times.push(t.elapsed().as_secs_f64());
                routes = p.local_routes.len();
            }
            times.sort_by(f64::total_cmp);
            let mid = times.len() / 2;
            let median = if times.len() % 2 == 1 {
                times[mid]
            } else {
                0.5 * (times[mid - 1] + times[mid])
            };
            rows.push(ScalingRow {
                stations: m,
                charging: n,
                median,
                local_routes: routes,
            });
        }
    }
    Ok(rows)
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn scaling_tsv(rows: &[ScalingRow]) -> String {
    let mut s = String::from("M\tN\tmedian_s\tlocal_routes\n");
    for r in rows {
        let _ = writeln!(s, "{}\t{}\t{:.6}\t{}", r.stations, r.charging, r.median, r.local_routes);
    }
    let mut ns: Vec<usize> = rows.iter().map(|r| r.charging).collect();
    ns.dedup();
    for n in ns {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.charging == n)
            .map(|r| (r.stations as f64, r.median))
            .collect();
        if let Some(k) = loglog_slope(&pts) {
            let _ = writeln!(s, "# N={n} log-log slope in M: {k:.2}");
        }
    }
    s
}
