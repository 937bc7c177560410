//! Minimum-time planning with an unlimited battery.
//!
//! With no battery limit the UAV always flies at its top speed, so the problem
//! is the shortest covered path. Its breakpoints can be restricted to
//! intersection points of coverage boundaries: the graph over
//! `{u0, uF} ∪ intersections`, with an edge for every covered segment, holds an
//! optimal path.

use crate::error::{Error, Result};
use crate::geometry::{
    circle_intersections, coverage_connected, disks_overlap, segment_outage, Point, TANGENCY_REL_TOL,
};
use crate::graph::{dijkstra, PlanGraph};
use crate::map::{NetworkMap, POSITION_TOL};
use crate::trajectory::{Objective, PlanResult, Terminal, Trajectory};

/// Pairwise boundary intersections of overlapping effective disks,
/// deduplicated to [`POSITION_TOL`] and sorted by `(x, y)`.
pub fn build_intersection_vertices(map: &NetworkMap) -> Vec<Point> {
    let m = map.stations.len();
    let mut points: Vec<Point> = Vec::new();
    for a in 0..m {
        let ra = map.radius(a);
        if ra <= 0.0 {
            continue;
        }
        for b in a + 1..m {
            let rb = map.radius(b);
            if rb <= 0.0 || !disks_overlap(map, a, b) {
                continue;
            }
            let pa = map.stations[a].position;
            let pb = map.stations[b].position;
            for p in circle_intersections(pa, ra, pb, rb, TANGENCY_REL_TOL) {
                if !points.iter().any(|q| q.dist(p) <= POSITION_TOL) {
                    points.push(p);
                }
            }
        }
    }
    points.sort_by(Point::lex_cmp);
    points
}

/// Every covered segment between distinct points of `points`, as
/// `(i, j, length)` with `i < j`. Segments shorter than [`POSITION_TOL`] are
/// skipped.
pub fn covered_segments(points: &[Point], map: &NetworkMap) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let len = points[i].dist(points[j]);
            if len > POSITION_TOL && !segment_outage(points[i], points[j], map) {
                out.push((i, j, len));
            }
        }
    }
    out
}

/// Shortest covered trajectory from `u0` to `uF` at constant speed `v_top`.
pub fn plan_unlimited(map: &NetworkMap, v_top: f64) -> Result<PlanResult> {
    map.validate()?;
    if !(v_top.is_finite() && v_top > 0.0) {
        return Err(Error::InvalidParameter {
            name: "v_top",
            reason: format!("must be finite and > 0, got {v_top}"),
        });
    }
    if !coverage_connected(map.u0, map.uf, map) {
        return Ok(PlanResult::infeasible(Objective::Time, Vec::new()));
    }

    let mut vertices = vec![map.u0];
    let goal = if map.u0.dist(map.uf) <= POSITION_TOL {
        0
    } else {
        vertices.push(map.uf);
        1
    };
    for p in build_intersection_vertices(map) {
        if p.dist(map.u0) > POSITION_TOL && p.dist(map.uf) > POSITION_TOL {
            vertices.push(p);
        }
    }

    let edges = covered_segments(&vertices, map);
    let mut g = PlanGraph::undirected(vertices);
    for (i, j, len) in edges {
        g.add_edge(i, j, len / v_top)?;
    }
    let Some(best) = dijkstra(&g, 0, goal) else {
        return Ok(PlanResult::infeasible(Objective::Time, Vec::new()));
    };

    let path: Vec<Point> = best.vertices.iter().map(|&i| *g.vertex(i)).collect();
    let mut trajectory = Trajectory::default();
    trajectory.push_polyline(&path, v_top);
    Ok(PlanResult {
        feasible: true,
        objective: Objective::Time,
        value: best.weight,
        trajectory,
        visits: vec![Terminal::Start, Terminal::Goal],
        local_routes: Vec::new(),
    })
}
