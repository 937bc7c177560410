//! Lattice planner used as an independent upper bound on the exact planners.
//!
//! Covered points of the lattice `step * (i, j)` are joined by straight moves
//! along every primitive vector up to Chebyshev length 5, each checked against
//! coverage. Terminals attach to covered lattice points within
//! [`ATTACH_RADIUS`]. Lattices anchor at the origin, so halving the step
//! yields a supergraph and results never get worse under refinement.
//!
//! Search is A* under the stencil's polygonal norm, which is exact for
//! unobstructed moves and keeps the frontier narrow on long routes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::battery::{max_feasible_speed, solve_global, stretch_budget};
use crate::error::{Error, Result};
use crate::geometry::{coverage_connected, is_covered, segment_outage, station_covers, Point};
use crate::map::{NetworkMap, POSITION_TOL};
use crate::model::UavParams;
use crate::trajectory::{LocalRoute, Objective, PlanResult, Terminal, Trajectory};

/// Terminals connect to lattice points at most this far away (m).
pub const ATTACH_RADIUS: f64 = 16.0;

const STENCIL_RADIUS: i32 = 5;

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Primitive lattice vectors with Chebyshev length at most 5.
pub fn stencil() -> Vec<(i32, i32)> {
    let r = STENCIL_RADIUS;
    let mut out = Vec::new();
    for i in -r..=r {
        for j in -r..=r {
            if (i, j) != (0, 0) && gcd(i.abs(), j.abs()) == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Norm whose unit ball is the convex hull of the normalised stencil.
/// Folded to the octant `0 <= y <= x` by symmetry.
struct Gauge {
    normals: Vec<(f64, f64)>,
    max_ratio: f64,
}

impl Gauge {
    fn new() -> Self {
        let mut dirs: Vec<(f64, f64)> = stencil()
            .into_iter()
            .filter(|&(i, j)| 0 <= j && j <= i)
            .map(|(i, j)| {
                let n = f64::from(i).hypot(f64::from(j));
                (f64::from(i) / n, f64::from(j) / n)
            })
            .collect();
        dirs.sort_by(|a, b| a.1.atan2(a.0).total_cmp(&b.1.atan2(b.0)));
        let normals: Vec<(f64, f64)> = dirs
            .windows(2)
            .map(|w| {
                // n . u = 1 and n . v = 1
                let ((ux, uy), (vx, vy)) = (w[0], w[1]);
                let det = ux * vy - uy * vx;
                ((vy - uy) / det, (ux - vx) / det)
            })
            .collect();
        let max_ratio = normals.iter().map(|n| n.0.hypot(n.1)).fold(1.0, f64::max);
        Gauge { normals, max_ratio }
    }

    fn norm(&self, d: Point) -> f64 {
        let (mut x, mut y) = (d.x.abs(), d.y.abs());
        if y > x {
            std::mem::swap(&mut x, &mut y);
        }
        self.normals.iter().map(|n| n.0 * x + n.1 * y).fold(0.0, f64::max)
    }
}

struct Node {
    pos: Point,
    /// Stations covering the node, first 128 only; a shared bit proves a
    /// segment covered without a full check.
    mask: u128,
    g: f64,
    parent: u32,
    closed: bool,
}

#[derive(PartialEq)]
struct Open {
    f: f64,
    g: f64,
    id: u32,
}

impl Eq for Open {}

impl PartialOrd for Open {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Open {
    // min f, then max g, then min id
    fn cmp(&self, o: &Self) -> Ordering {
        o.f.total_cmp(&self.f)
            .then(self.g.total_cmp(&o.g))
            .then(o.id.cmp(&self.id))
    }
}

const NONE: u32 = u32::MAX;
const SOURCE: u32 = 0;
const TARGET: u32 = 1;

struct Search<'a> {
    map: &'a NetworkMap,
    step: f64,
    moves: Vec<(i32, i32, f64)>,
    gauge: Gauge,
    nodes: Vec<Node>,
    index: FxHashMap<(i64, i64), u32>,
    succ: Vec<(u32, f64)>,
}

impl<'a> Search<'a> {
    fn mask(&self, p: Point) -> u128 {
        (0..self.map.stations.len().min(128))
            .filter(|&m| station_covers(self.map, m, p))
            .fold(0u128, |acc, m| acc | (1u128 << m))
    }

    fn push_node(&mut self, pos: Point) -> u32 {
        let mask = self.mask(pos);
        self.nodes.push(Node {
            pos,
            mask,
            g: f64::INFINITY,
            parent: NONE,
            closed: false,
        });
        (self.nodes.len() - 1) as u32
    }

    /// Node id of a covered lattice point, creating it on first sight.
    fn lattice(&mut self, i: i64, j: i64) -> Option<u32> {
        if let Some(&id) = self.index.get(&(i, j)) {
            return (id != NONE).then_some(id);
        }
        let pos = Point::new(i as f64 * self.step, j as f64 * self.step);
        let id = if is_covered(pos, self.map) {
            self.push_node(pos)
        } else {
            NONE
        };
        self.index.insert((i, j), id);
        (id != NONE).then_some(id)
    }

    fn link_covered(&self, a: u32, b: u32) -> bool {
        let (na, nb) = (&self.nodes[a as usize], &self.nodes[b as usize]);
        na.mask & nb.mask != 0 || !segment_outage(na.pos, nb.pos, self.map)
    }

    /// Lattice points within the attach radius of `p`.
    fn attach_points(&mut self, p: Point) -> Vec<u32> {
        let k = (ATTACH_RADIUS / self.step).ceil() as i64 + 1;
        let (ci, cj) = ((p.x / self.step).round() as i64, (p.y / self.step).round() as i64);
        let mut out = Vec::new();
        for i in ci - k..=ci + k {
            for j in cj - k..=cj + k {
                let q = Point::new(i as f64 * self.step, j as f64 * self.step);
                if q.dist(p) <= ATTACH_RADIUS {
                    if let Some(id) = self.lattice(i, j) {
                        out.push(id);
                    }
                }
            }
        }
        out
    }

    fn lattice_coords(&self, id: u32) -> (i64, i64) {
        let p = self.nodes[id as usize].pos;
        ((p.x / self.step).round() as i64, (p.y / self.step).round() as i64)
    }

    fn run(&mut self, a: Point, b: Point) -> Option<(f64, Vec<Point>)> {
        self.push_node(a);
        self.push_node(b);
        let slack = ATTACH_RADIUS * (self.gauge.max_ratio - 1.0) + 1e-9;
        let h = |gauge: &Gauge, p: Point| p.dist(b).max(gauge.norm(b - p) - slack);

        let mut heap = BinaryHeap::new();
        self.nodes[SOURCE as usize].g = 0.0;
        heap.push(Open {
            f: h(&self.gauge, a),
            g: 0.0,
            id: SOURCE,
        });
        while let Some(Open { g, id, .. }) = heap.pop() {
            let u = id as usize;
            if self.nodes[u].closed || g > self.nodes[u].g {
                continue;
            }
            self.nodes[u].closed = true;
            if id == TARGET {
                break;
            }
            let pos = self.nodes[u].pos;
            let mut succ = std::mem::take(&mut self.succ);
            succ.clear();
            if id == SOURCE {
                for v in self.attach_points(pos) {
                    succ.push((v, pos.dist(self.nodes[v as usize].pos)));
                }
            } else {
                let (i, j) = self.lattice_coords(id);
                for k in 0..self.moves.len() {
                    let (di, dj, len) = self.moves[k];
                    if let Some(v) = self.lattice(i + i64::from(di), j + i64::from(dj)) {
                        succ.push((v, len));
                    }
                }
            }
            if pos.dist(b) <= ATTACH_RADIUS {
                succ.push((TARGET, pos.dist(b)));
            }
            for &(v, len) in &succ {
                let cand = g + len;
                if self.nodes[v as usize].closed || cand >= self.nodes[v as usize].g {
                    continue;
                }
                if !self.link_covered(id, v) {
                    continue;
                }
                let n = &mut self.nodes[v as usize];
                n.g = cand;
                n.parent = id;
                let f = cand + h(&self.gauge, n.pos);
                heap.push(Open { f, g: cand, id: v });
            }
            self.succ = succ;
        }

        let t = &self.nodes[TARGET as usize];
        if !t.closed {
            return None;
        }
        let mut path = vec![t.pos];
        let mut cur = TARGET;
        while cur != SOURCE {
            cur = self.nodes[cur as usize].parent;
            path.push(self.nodes[cur as usize].pos);
        }
        path.reverse();
        let length = path.windows(2).map(|w| w[0].dist(w[1])).sum();
        Some((length, path))
    }
}

/// Shortest lattice route between two covered points, or `None` if the
/// lattice does not connect them.
pub fn grid_route(map: &NetworkMap, a: Point, b: Point, step: f64) -> Result<Option<(f64, Vec<Point>)>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::param("grid_step", format!("must be finite and > 0, got {step}")));
    }
    if !coverage_connected(a, b, map) {
        return Ok(None);
    }
    if a.dist(b) <= POSITION_TOL {
        return Ok(Some((0.0, vec![a])));
    }
    let moves = stencil()
        .into_iter()
        .map(|(i, j)| (i, j, step * f64::from(i).hypot(f64::from(j))))
        .collect();
    let mut s = Search {
        map,
        step,
        moves,
        gauge: Gauge::new(),
        nodes: Vec::new(),
        index: FxHashMap::default(),
        succ: Vec::new(),
    };
    Ok(s.run(a, b))
}

fn terminal_position(map: &NetworkMap, t: Terminal) -> Point {
    match t {
        Terminal::Station(n) => map.charging[n].position,
        Terminal::Start => map.u0,
        Terminal::Goal => map.uf,
    }
}

fn lattice_route(map: &NetworkMap, from: Terminal, to: Terminal, step: f64) -> Result<LocalRoute> {
    let (a, b) = (terminal_position(map, from), terminal_position(map, to));
    let found = grid_route(map, a, b, step)?;
    Ok(LocalRoute {
        from,
        to,
        connected: coverage_connected(a, b, map),
        length: found.as_ref().map_or(f64::INFINITY, |f| f.0),
        path: found.map(|f| f.1).unwrap_or_default(),
        v_max: None,
    })
}

/// Lattice counterpart of the exact planners. With `battery` off the UAV
/// flies straight to the goal at its fastest (time) or most economical
/// (energy) speed.
pub fn grid_oracle_plan(
    map: &NetworkMap,
    uav: &UavParams,
    step: f64,
    objective: Objective,
    battery: bool,
) -> Result<PlanResult> {
    map.validate()?;
    uav.validate()?;
    if !battery {
        let route = lattice_route(map, Terminal::Start, Terminal::Goal, step)?;
        if !route.has_path() {
            return Ok(PlanResult::infeasible(objective, vec![route]));
        }
        let (v, value) = match objective {
            Objective::Time => {
                let v = uav.speeds.max();
                (v, route.length / v)
            }
            Objective::Energy => {
                let v = uav.energy_optimal_speed();
                (v, route.length * uav.energy_per_metre(v))
            }
        };
        let mut trajectory = Trajectory::default();
        trajectory.push_polyline(&route.path, v);
        return Ok(PlanResult {
            feasible: true,
            objective,
            value,
            trajectory,
            visits: vec![Terminal::Start, Terminal::Goal],
            local_routes: vec![route],
        });
    }

    let mut terms = vec![Terminal::Start];
    terms.extend(
        (0..map.charging.len())
            .filter(|&n| map.charging[n].is_available())
            .map(Terminal::Station),
    );
    terms.push(Terminal::Goal);
    // one search per unordered pair; the reverse direction reuses it
    let mut cache: Vec<((Terminal, Terminal), LocalRoute)> = Vec::new();
    let mut routes = Vec::new();
    for &from in &terms[..terms.len() - 1] {
        for &to in &terms[1..] {
            if from == to {
                continue;
            }
            let mut r = match cache.iter().find(|(k, _)| *k == (to, from)) {
                Some((_, rev)) => {
                    let mut r = rev.clone();
                    r.from = from;
                    r.to = to;
                    r.path.reverse();
                    r
                }
                None => {
                    let r = lattice_route(map, from, to, step)?;
                    cache.push(((from, to), r.clone()));
                    r
                }
            };
            if r.has_path() {
                r.v_max = max_feasible_speed(r.length, uav, stretch_budget(map, uav, from));
            }
            routes.push(r);
        }
    }
    Ok(solve_global(map, uav, objective, routes))
}
