#![allow(dead_code)]

use covroute::battery::edge_cost;
use covroute::mapgen::{generate_map, MapSpec};
use covroute::{NetworkMap, Objective, PlanResult, Terminal, UavParams};

/// Reference UAV with a third of the battery, so swaps matter on
/// few-kilometre maps.
pub fn small_battery_uav() -> UavParams {
    UavParams {
        w2: 0.3,
        ..UavParams::reference()
    }
}

/// `count` feasible maps with 2..=m_max stations and 0..=n_max charging
/// stations, cycling with the seed.
pub fn suite(uav: &UavParams, count: u64, size: f64, m_max: usize, n_max: usize) -> Vec<NetworkMap> {
    (0..count)
        .map(|seed| {
            let m = 2 + (seed as usize) % (m_max - 1);
            let n = (seed as usize) % (n_max + 1);
            generate_map(&MapSpec::new(seed, m, n, size), uav).expect("feasible draw")
        })
        .collect()
}

/// Maps whose trip exceeds the UAV's best range, so every plan swaps at
/// least once. 6..=10 stations, 2..=4 charging stations.
pub fn swap_suite(uav: &UavParams, count: u64, size: f64) -> Vec<NetworkMap> {
    (0..count)
        .map(|seed| {
            let spec = MapSpec {
                min_trip: 1.02 * uav.range(uav.energy_optimal_speed()),
                ..MapSpec::new(seed, 6 + seed as usize % 5, 2 + seed as usize % 3, size)
            };
            generate_map(&spec, uav).expect("feasible draw")
        })
        .collect()
}

/// Best objective over every visiting order of distinct available stations,
/// using the plan's own local routes.
pub fn brute_force(map: &NetworkMap, uav: &UavParams, plan: &PlanResult, objective: Objective) -> f64 {
    let cost = |a: Terminal, b: Terminal| {
        plan.local_routes
            .iter()
            .find(|r| r.from == a && r.to == b)
            .and_then(|r| edge_cost(r, map, uav, objective))
            .map(|c| c.0)
    };
    let stations: Vec<Terminal> = (0..map.charging.len())
        .filter(|&n| map.charging[n].is_available())
        .map(Terminal::Station)
        .collect();
    let mut best = f64::INFINITY;
    let mut used = vec![false; stations.len()];
    fn go(
        at: Terminal,
        acc: f64,
        stations: &[Terminal],
        used: &mut [bool],
        cost: &dyn Fn(Terminal, Terminal) -> Option<f64>,
        best: &mut f64,
    ) {
        if let Some(c) = cost(at, Terminal::Goal) {
            *best = best.min(acc + c);
        }
        for k in 0..stations.len() {
            if used[k] {
                continue;
            }
            if let Some(c) = cost(at, stations[k]) {
                used[k] = true;
                go(stations[k], acc + c, stations, used, cost, best);
                used[k] = false;
            }
        }
    }
    go(Terminal::Start, 0.0, &stations, &mut used, &cost, &mut best);
    best
}
