//! Planning with a finite battery and swap stations.
//!
//! Two levels. The local level finds, for every ordered pair of terminals
//! (start, goal, available charging stations), the shortest covered path and
//! the speeds that cross it on one battery. The global level runs Dijkstra
//! over terminals, with a battery swap at every intermediate station.

use crate::error::{Error, Result};
use crate::geometry::{coverage_connected, Point};
use crate::graph::{dijkstra, Lexi, PlanGraph};
use crate::map::{NetworkMap, POSITION_TOL};
use crate::model::UavParams;
use crate::planner::{build_intersection_vertices, covered_segments};
use crate::trajectory::{LocalRoute, Objective, PlanResult, Step, SwapEvent, Terminal, Trajectory};

type Segment = (usize, usize, f64);

/// Distance covered at speed `v` on `budget` joules.
fn reach(uav: &UavParams, v: f64, budget: f64) -> f64 {
    v * uav.battery.eta * budget / uav.power_at(v)
}

/// Fastest positive speed whose range on `budget` covers `length`.
pub fn max_feasible_speed(length: f64, uav: &UavParams, budget: f64) -> Option<f64> {
    if length <= 0.0 {
        return Some(uav.speeds.max());
    }
    uav.speeds
        .positive()
        .iter()
        .rev()
        .copied()
        .find(|&v| reach(uav, v, budget) >= length)
}

/// Feasible speed with the least energy per metre; ties go to the faster one.
pub fn energy_optimal_feasible_speed(length: f64, uav: &UavParams, budget: f64) -> Option<f64> {
    if length <= 0.0 {
        return Some(uav.speeds.max());
    }
    let mut best: Option<(f64, f64)> = None;
    for &v in uav.speeds.positive() {
        if reach(uav, v, budget) < length {
            continue;
        }
        let e = uav.energy_per_metre(v);
        if best.is_none_or(|(be, _)| e <= be) {
            best = Some((e, v));
        }
    }
    best.map(|(_, v)| v)
}

/// Speed check on a full battery: `(feasible, v_max)`, with `v_max = 0` when
/// no speed covers `length`.
pub fn chk_sp(length: f64, uav: &UavParams) -> (bool, f64) {
    match max_feasible_speed(length, uav, uav.flight_budget()) {
        Some(v) => (true, v),
        None => (false, 0.0),
    }
}

/// Energy available for the stretch that starts at `from`. Leaving a station
/// costs its energy surcharge.
pub fn stretch_budget(map: &NetworkMap, uav: &UavParams, from: Terminal) -> f64 {
    let surcharge = match from {
        Terminal::Station(n) => map.charging[n].energy_surcharge,
        _ => 0.0,
    };
    uav.flight_budget() - surcharge
}

fn position(map: &NetworkMap, t: Terminal) -> Point {
    match t {
        Terminal::Station(n) => map.charging[n].position,
        Terminal::Start => map.u0,
        Terminal::Goal => map.uf,
    }
}

fn dwell(map: &NetworkMap, t: Terminal) -> f64 {
    match t {
        Terminal::Station(n) => map.charging[n].delay,
        _ => 0.0,
    }
}

/// Covered segments over `[charging stations, u0, uF, intersections]`,
/// partitioned by terminal endpoint.
#[derive(Debug, Clone)]
pub struct EdgeSets {
    pub vertices: Vec<Point>,
    /// Segments with no terminal endpoint.
    pub internal: Vec<Segment>,
    /// `incident[t]` holds every segment with terminal vertex `t` as an
    /// endpoint. Terminal vertices are the stations, then u0, then uF.
    pub incident: Vec<Vec<Segment>>,
}

impl EdgeSets {
    pub fn terminal_count(&self) -> usize {
        self.incident.len()
    }

    /// Vertex index of a terminal.
    pub fn vertex_of(&self, t: Terminal) -> usize {
        let n = self.terminal_count() - 2;
        match t {
            Terminal::Station(i) => i,
            Terminal::Start => n,
            Terminal::Goal => n + 1,
        }
    }
}

pub fn precompute_edge_sets(map: &NetworkMap) -> EdgeSets {
    let mut vertices: Vec<Point> = map.charging.iter().map(|c| c.position).collect();
    vertices.push(map.u0);
    vertices.push(map.uf);
    let terminals = vertices.len();
    vertices.extend(build_intersection_vertices(map));

    let mut internal = Vec::new();
    let mut incident = vec![Vec::new(); terminals];
    for seg @ (i, j, _) in covered_segments(&vertices, map) {
        if i < terminals {
            incident[i].push(seg);
        }
        if j < terminals {
            incident[j].push(seg);
        }
        if i >= terminals && j >= terminals {
            internal.push(seg);
        }
    }
    EdgeSets {
        vertices,
        internal,
        incident,
    }
}

/// Shortest covered path between two terminals. `v_max` is left unset.
pub fn local_route(map: &NetworkMap, sets: &EdgeSets, from: Terminal, to: Terminal) -> LocalRoute {
    let mut base = PlanGraph::undirected(sets.vertices.clone());
    for &(i, j, len) in &sets.internal {
        base.add_edge(i, j, len)
            .expect("covered segment lengths are admissible");
    }
    local_route_on(map, sets, &base, from, to)
}

fn local_route_on(
    map: &NetworkMap,
    sets: &EdgeSets,
    base: &PlanGraph<Point>,
    from: Terminal,
    to: Terminal,
) -> LocalRoute {
    let (a, b) = (position(map, from), position(map, to));
    let mut route = LocalRoute {
        from,
        to,
        connected: coverage_connected(a, b, map),
        length: f64::INFINITY,
        path: Vec::new(),
        v_max: None,
    };
    if !route.connected {
        return route;
    }
    if a.dist(b) <= POSITION_TOL {
        route.length = 0.0;
        route.path = vec![a];
        return route;
    }

    let (s, t) = (sets.vertex_of(from), sets.vertex_of(to));
    let terminals = sets.terminal_count();
    let mut g = base.clone();
    for &(i, j, len) in &sets.incident[s] {
        let other = if i == s { j } else { i };
        if other >= terminals || other == t {
            g.add_edge(i, j, len).expect("admissible");
        }
    }
    for &(i, j, len) in &sets.incident[t] {
        let other = if i == t { j } else { i };
        if other >= terminals {
            g.add_edge(i, j, len).expect("admissible");
        }
    }
    if let Some(sp) = dijkstra(&g, s, t) {
        route.length = sp.weight;
        route.path = sp.vertices.iter().map(|&v| sets.vertices[v]).collect();
    }
    route
}

/// Terminals in global-graph order: start, available stations, goal.
fn global_terminals(map: &NetworkMap) -> Vec<Terminal> {
    let mut out = vec![Terminal::Start];
    out.extend(
        map.charging
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_available())
            .map(|(n, _)| Terminal::Station(n)),
    );
    out.push(Terminal::Goal);
    out
}

/// Local routes for every ordered terminal pair the global graph can use,
/// with `v_max` filled in.
pub fn local_routes(map: &NetworkMap, uav: &UavParams) -> Result<Vec<LocalRoute>> {
    map.validate()?;
    uav.validate()?;
    let sets = precompute_edge_sets(map);
    let mut base = PlanGraph::undirected(sets.vertices.clone());
    for &(i, j, len) in &sets.internal {
        base.add_edge(i, j, len)?;
    }
    let terms = global_terminals(map);
    let mut routes = Vec::new();
    for &from in &terms[..terms.len() - 1] {
        for &to in &terms[1..] {
            if from == to {
                continue;
            }
            let mut r = local_route_on(map, &sets, &base, from, to);
            if r.has_path() {
                r.v_max = max_feasible_speed(r.length, uav, stretch_budget(map, uav, from));
            }
            routes.push(r);
        }
    }
    Ok(routes)
}

/// Global edge cost and flight speed for a local route, or `None` when the
/// route cannot be flown on one battery.
pub fn edge_cost(route: &LocalRoute, map: &NetworkMap, uav: &UavParams, objective: Objective) -> Option<(f64, f64)> {
    if !route.has_path() {
        return None;
    }
    let budget = stretch_budget(map, uav, route.from);
    match objective {
        Objective::Time => {
            let v = max_feasible_speed(route.length, uav, budget)?;
            Some((route.length / v + dwell(map, route.to), v))
        }
        Objective::Energy => {
            let v = energy_optimal_feasible_speed(route.length, uav, budget)?;
            Some((route.length * uav.energy_per_metre(v), v))
        }
    }
}

/// Global level: Dijkstra over terminals using `routes`. Among equal
/// objectives the plan with fewer swaps wins, then the smaller station
/// sequence.
pub fn solve_global(map: &NetworkMap, uav: &UavParams, objective: Objective, routes: Vec<LocalRoute>) -> PlanResult {
    let terms = global_terminals(map);
    let index = |t: Terminal| terms.iter().position(|&x| x == t);
    let mut g: PlanGraph<Terminal, Lexi> = PlanGraph::directed(terms.clone());
    let mut chosen: Vec<Vec<Option<(usize, f64)>>> = vec![vec![None; terms.len()]; terms.len()];
    for (k, r) in routes.iter().enumerate() {
        let (Some(i), Some(j)) = (index(r.from), index(r.to)) else {
            continue;
        };
        if r.from == Terminal::Goal || r.to == Terminal::Start || i == j {
            continue;
        }
        if let Some((cost, v)) = edge_cost(r, map, uav, objective) {
            let hops = u32::from(matches!(r.to, Terminal::Station(_)));
            g.add_edge(i, j, Lexi { value: cost, hops }).expect("finite edge cost");
            chosen[i][j] = Some((k, v));
        }
    }

    let goal = terms.len() - 1;
    let Some(best) = dijkstra(&g, 0, goal) else {
        return PlanResult::infeasible(objective, routes);
    };
    let mut trajectory = Trajectory::default();
    for w in best.vertices.windows(2) {
        let (k, v) = chosen[w[0]][w[1]].expect("edge on path was added");
        trajectory.push_polyline(&routes[k].path, v);
        if let Terminal::Station(n) = terms[w[1]] {
            trajectory.steps.push(Step::Swap(SwapEvent {
                station: n,
                dwell: map.charging[n].delay,
            }));
        }
    }
    PlanResult {
        feasible: true,
        objective,
        value: best.weight.value,
        trajectory,
        visits: best.vertices.iter().map(|&i| terms[i]).collect(),
        local_routes: routes,
    }
}

fn plan(map: &NetworkMap, uav: &UavParams, objective: Objective) -> Result<PlanResult> {
    let routes = local_routes(map, uav)?;
    Ok(solve_global(map, uav, objective, routes))
}

/// Minimum mission time including swap delays.
pub fn plan_min_time(map: &NetworkMap, uav: &UavParams) -> Result<PlanResult> {
    plan(map, uav, Objective::Time)
}

/// Minimum propulsion energy; swap delays do not count.
pub fn plan_min_energy(map: &NetworkMap, uav: &UavParams) -> Result<PlanResult> {
    plan(map, uav, Objective::Energy)
}

/// Energy of flying `splits` (sub-length, speed) versus flying the same total
/// length in the same total time at one constant speed. Returns
/// `(mixed, fixed)`.
pub fn fixed_speed_energy_bound(splits: &[(f64, f64)], uav: &UavParams) -> Result<(f64, f64)> {
    if splits.is_empty() {
        return Err(Error::param("splits", "need at least one split"));
    }
    let mut length = 0.0;
    let mut time = 0.0;
    let mut mixed = 0.0;
    for &(l, v) in splits {
        if !(l.is_finite() && l >= 0.0 && v.is_finite() && v > 0.0) {
            return Err(Error::param("splits", format!("bad split ({l}, {v})")));
        }
        length += l;
        time += l / v;
        mixed += l / v * uav.power_at(v) / uav.battery.eta;
    }
    if time == 0.0 {
        return Ok((0.0, 0.0));
    }
    let v_bar = length / time;
    Ok((mixed, time * uav.power_at(v_bar) / uav.battery.eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{BaseStation, ChargingStation};
    use crate::model::SpeedSet;

    fn disk_map(disks: &[(f64, f64)], r: f64, cs: &[(f64, f64, f64)], u0: Point, uf: Point) -> NetworkMap {
        NetworkMap {
            d0: r,
            stations: disks
                .iter()
                .map(|&(x, y)| BaseStation {
                    position: Point::new(x, y),
                    offset: 0.0,
                })
                .collect(),
            charging: cs
                .iter()
                .map(|&(x, y, tau)| ChargingStation::new(Point::new(x, y), tau))
                .collect(),
            u0,
            uf,
            altitude: 100.0,
            cs_altitude: 100.0,
        }
    }

    #[test]
    fn chk_sp_edges() {
        let uav = UavParams::reference();
        assert_eq!(chk_sp(0.0, &uav), (true, 30.0));
        assert_eq!(chk_sp(1e6, &uav), (false, 0.0));
        let (ok, v) = chk_sp(uav.range(30.0), &uav);
        assert!(ok && v == 30.0);
        let (ok, v) = chk_sp(uav.range(30.0) + 1.0, &uav);
        assert!(ok && v < 30.0);
    }

    #[test]
    fn chk_sp_matches_exhaustive_scan() {
        let uav = UavParams::reference();
        let mut prev = f64::INFINITY;
        for k in 0..100 {
            let len = 9600.0 * k as f64 / 99.0;
            let want = (1..=30)
                .map(f64::from)
                .filter(|&v| uav.range(v) >= len)
                .fold(0.0, f64::max);
            let (ok, v) = chk_sp(len, &uav);
            assert_eq!(ok, want > 0.0);
            assert_eq!(v, want);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn energy_speed_is_global_optimum_when_unconstrained() {
        let uav = UavParams::reference();
        let v = energy_optimal_feasible_speed(1000.0, &uav, uav.flight_budget()).unwrap();
        assert_eq!(v, uav.energy_optimal_speed());
    }

    #[test]
    fn edge_sets_partition() {
        let map = disk_map(
            &[(0.0, 0.0), (1500.0, 0.0)],
            1000.0,
            &[(100.0, 0.0, 10.0), (1400.0, 0.0, 10.0)],
            Point::new(-100.0, 950.0),
            Point::new(1600.0, 950.0),
        );
        let sets = precompute_edge_sets(&map);
        assert_eq!(sets.terminal_count(), 4);
        assert_eq!(sets.vertices.len(), 6);
        // the two intersection points see each other through the lens
        assert_eq!(sets.internal, vec![(4, 5, sets.vertices[4].dist(sets.vertices[5]))]);
        // c1 - c2 is covered and listed under both stations
        let d = sets.incident[0].iter().find(|s| s.0 == 0 && s.1 == 1).copied();
        assert!(d.is_some());
        assert!(sets.incident[1].contains(&d.unwrap()));
        // u0 - uF leaves coverage
        assert!(!sets.incident[2].iter().any(|s| s.1 == 3));
    }

    #[test]
    fn direct_route_in_one_disk() {
        let map = disk_map(
            &[(0.0, 0.0)],
            1000.0,
            &[],
            Point::new(-300.0, 0.0),
            Point::new(300.0, 400.0),
        );
        let uav = UavParams::reference();
        let r = plan_min_time(&map, &uav).unwrap();
        assert!(r.feasible);
        assert_eq!(r.swap_count(), 0);
        let d = map.u0.dist(map.uf);
        assert!((r.value - d / 30.0).abs() < 1e-12);
        let e = plan_min_energy(&map, &uav).unwrap();
        assert!(e.trajectory.legs().all(|l| l.speed == 23.0));
    }

    #[test]
    fn disconnected_pair() {
        let map = disk_map(
            &[(0.0, 0.0), (5000.0, 0.0)],
            1000.0,
            &[],
            Point::new(0.0, 0.0),
            Point::new(5000.0, 0.0),
        );
        let r = plan_min_time(&map, &UavParams::reference()).unwrap();
        assert!(!r.feasible);
        assert!(!r.local_routes[0].connected);
        assert!(r.trajectory.is_empty());
    }

    #[test]
    fn mandatory_swap() {
        // 12 km corridor of overlapping disks, CS in the middle
        let disks: Vec<(f64, f64)> = (0..7).map(|k| (2000.0 * k as f64, 0.0)).collect();
        let map = disk_map(
            &disks,
            1400.0,
            &[(6000.0, 0.0, 100.0)],
            Point::new(0.0, 0.0),
            Point::new(12000.0, 0.0),
        );
        let uav = UavParams::reference();
        let r = plan_min_time(&map, &uav).unwrap();
        assert!(r.feasible);
        assert_eq!(r.visits, vec![Terminal::Start, Terminal::Station(0), Terminal::Goal]);
        assert_eq!(r.swap_count(), 1);
        assert!((r.value - (6000.0 / 30.0 * 2.0 + 100.0)).abs() < 1e-9);
        assert!((r.trajectory.total_time() - r.value).abs() < 1e-9);
    }

    #[test]
    fn unavailable_station_is_skipped() {
        let disks: Vec<(f64, f64)> = (0..7).map(|k| (2000.0 * k as f64, 0.0)).collect();
        let map = disk_map(
            &disks,
            1400.0,
            &[(6000.0, 0.0, f64::INFINITY)],
            Point::new(0.0, 0.0),
            Point::new(12000.0, 0.0),
        );
        let r = plan_min_time(&map, &UavParams::reference()).unwrap();
        assert!(!r.feasible);
        assert!(r
            .local_routes
            .iter()
            .all(|l| l.from == Terminal::Start && l.to == Terminal::Goal));
    }

    #[test]
    fn surcharge_shrinks_the_next_stretch() {
        let disks: Vec<(f64, f64)> = (0..7).map(|k| (2000.0 * k as f64, 0.0)).collect();
        let mut map = disk_map(
            &disks,
            1400.0,
            &[(6000.0, 0.0, 100.0)],
            Point::new(0.0, 0.0),
            Point::new(12000.0, 0.0),
        );
        let uav = UavParams::reference();
        // leave just enough for 6 km at some speed below 30
        map.charging[0].energy_surcharge = uav.flight_budget() * (1.0 - 6000.0 / uav.range(30.0)) + 1.0;
        let r = plan_min_time(&map, &uav).unwrap();
        let speeds: Vec<f64> = r.trajectory.legs().map(|l| l.speed).collect();
        assert_eq!(speeds.first(), Some(&30.0));
        assert!(*speeds.last().unwrap() < 30.0);
    }

    #[test]
    fn single_speed_energy_equals_distance_routing() {
        let uav = UavParams::reference().with_speeds(SpeedSet::new(vec![0.0, 18.0]).unwrap());
        let disks = [(0.0, 0.0), (1500.0, 0.0)];
        let map = disk_map(
            &disks,
            1000.0,
            &[],
            Point::new(-100.0, 950.0),
            Point::new(1600.0, 950.0),
        );
        let e = plan_min_energy(&map, &uav).unwrap();
        let t = plan_min_time(&map, &uav).unwrap();
        let d = t.trajectory.total_distance();
        assert!((e.value - d * uav.energy_per_metre(18.0)).abs() < 1e-6);
        assert_eq!(e.trajectory.waypoints(), t.trajectory.waypoints());
    }

    #[test]
    fn jensen_examples() {
        let uav = UavParams::reference();
        let (m, f) = fixed_speed_energy_bound(&[(500.0, 20.0)], &uav).unwrap();
        assert!((m - f).abs() <= 1e-9 * m);
        let (m, f) = fixed_speed_energy_bound(&[(500.0, 16.0), (500.0, 24.0)], &uav).unwrap();
        assert!(f <= m);
        assert!(fixed_speed_energy_bound(&[], &uav).is_err());
        assert!(fixed_speed_energy_bound(&[(1.0, 0.0)], &uav).is_err());
    }
}
