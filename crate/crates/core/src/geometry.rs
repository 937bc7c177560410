//! Disk-union geometry over the effective coverage regions of a map.
//!
//! Coverage of a straight segment is decided exactly: each disk contributes
//! the parameter interval of the chord it cuts from the segment, and the
//! segment is covered iff the merged union of those intervals is `[0, 1]`.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::map::NetworkMap;

/// Slack added to every effective radius so that points computed on a
/// boundary (intersection vertices) still register as covered.
pub const RADIUS_SLACK: f64 = 1e-9;

/// Tolerance in segment parameter space when merging chord intervals.
pub const MERGE_TOL: f64 = 1e-12;

/// Relative tolerance on the discriminant below which two circles are
/// treated as tangent.
pub const TANGENCY_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Point at parameter `xi` along `self -> to`.
    pub fn lerp(self, to: Point, xi: f64) -> Point {
        Point::new(self.x + xi * (to.x - self.x), self.y + xi * (to.y - self.y))
    }

    /// Lexicographic order by `(x, y)`.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

/// Sub-interval `[lo, hi]` of a segment's parameter range `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Boundary crossings of two circles: zero, one (tangency) or two points.
/// Concentric circles never yield points, even when identical.
pub fn circle_intersections(c1: Point, r1: f64, c2: Point, r2: f64, rel_tol: f64) -> Vec<Point> {
    let d = c1.dist(c2);
    if d == 0.0 || r1 < 0.0 || r2 < 0.0 {
        return Vec::new();
    }
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let disc = r1 * r1 - a * a;
    let scale = r1.max(r2).max(d);
    let tol = rel_tol * scale * scale;
    let dir = (c2 - c1) * (1.0 / d);
    let foot = c1 + dir * a;
    if disc.abs() <= tol {
        return vec![foot];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let h = disc.sqrt();
    let normal = Point::new(-dir.y, dir.x);
    vec![foot - normal * h, foot + normal * h]
}

/// Parameter range of segment `x1 -> x2` inside the closed disk
/// `(center, radius)`, clipped to `[0, 1]`.
fn chord_interval(x1: Point, x2: Point, center: Point, radius: f64) -> Option<CoverageInterval> {
    let d = x2 - x1;
    let f = x1 - center;
    let r = radius + RADIUS_SLACK;
    let a = d.dot(d);
    let b = 2.0 * f.dot(d);
    let c = f.dot(f) - r * r;
    if a == 0.0 {
        return (c <= 0.0).then_some(CoverageInterval { lo: 0.0, hi: 1.0 });
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let (t1, t2) = if q == 0.0 {
        // b == 0 and disc == 0: tangent at the closest approach
        (0.0, 0.0)
    } else {
        (q / a, c / q)
    };
    let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    let lo = lo.max(0.0);
    let hi = hi.min(1.0);
    (lo <= hi).then_some(CoverageInterval { lo, hi })
}

/// Merged, ascending, disjoint parameter intervals of `x1 -> x2` that lie in
/// some effective coverage disk.
pub fn segment_coverage_intervals(x1: Point, x2: Point, map: &NetworkMap) -> Vec<CoverageInterval> {
    let mut raw: Vec<CoverageInterval> = map.disks().filter_map(|(c, r)| chord_interval(x1, x2, c, r)).collect();
    raw.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi)));
    let mut merged: Vec<CoverageInterval> = Vec::with_capacity(raw.len());
    for iv in raw {
        match merged.last_mut() {
            Some(last) if iv.lo <= last.hi + MERGE_TOL => last.hi = last.hi.max(iv.hi),
            _ => merged.push(iv),
        }
    }
    merged
}

/// True when some point of segment `x1 -> x2` lies outside every effective
/// coverage disk.
pub fn segment_outage(x1: Point, x2: Point, map: &NetworkMap) -> bool {
    if x1 == x2 {
        return !is_covered(x1, map);
    }
    let iv = segment_coverage_intervals(x1, x2, map);
    !(iv.len() == 1 && iv[0].lo <= MERGE_TOL && iv[0].hi >= 1.0 - MERGE_TOL)
}

/// Whether `p` lies inside the effective disk of station `m`.
pub fn station_covers(map: &NetworkMap, m: usize, p: Point) -> bool {
    let r = map.radius(m) + RADIUS_SLACK;
    map.stations[m].position.dist2(p) <= r * r
}

/// Whether `p` lies in the total coverage map.
pub fn is_covered(p: Point, map: &NetworkMap) -> bool {
    (0..map.stations.len()).any(|m| station_covers(map, m, p))
}

/// Depth of `p` inside the coverage map: the largest `radius - distance` over
/// all stations. Negative outside coverage.
pub fn coverage_margin(p: Point, map: &NetworkMap) -> f64 {
    map.disks()
        .map(|(c, r)| r - c.dist(p))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Whether two stations' effective disks touch or overlap.
pub fn disks_overlap(map: &NetworkMap, m: usize, k: usize) -> bool {
    let a = &map.stations[m];
    let b = &map.stations[k];
    a.position.dist(b.position) <= map.radius(m) + map.radius(k) + 2.0 * RADIUS_SLACK
}

/// Connected component label of every station in the disk-overlap graph.
pub fn disk_components(map: &NetworkMap) -> Vec<usize> {
    let m = map.stations.len();
    let mut label = vec![usize::MAX; m];
    let mut next = 0;
    for start in 0..m {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..m {
                if label[v] == usize::MAX && disks_overlap(map, u, v) {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// True iff `p` and `q` are both covered and their covering disks are linked
/// through a chain of pairwise-overlapping disks.
pub fn coverage_connected(p: Point, q: Point, map: &NetworkMap) -> bool {
    let m = map.stations.len();
    let covers_q: Vec<bool> = (0..m).map(|k| station_covers(map, k, q)).collect();
    if !covers_q.iter().any(|&c| c) {
        return false;
    }
    let mut seen = vec![false; m];
    let mut queue = VecDeque::new();
    for k in 0..m {
        if station_covers(map, k, p) {
            seen[k] = true;
            queue.push_back(k);
        }
    }
    while let Some(u) = queue.pop_front() {
        if covers_q[u] {
            return true;
        }
        for v in 0..m {
            if !seen[v] && disks_overlap(map, u, v) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::BaseStation;

    fn map_of(disks: &[(f64, f64, f64)]) -> NetworkMap {
        let d0 = disks.iter().map(|d| d.2).fold(0.0, f64::max).max(1.0);
        NetworkMap {
            d0,
            stations: disks
                .iter()
                .map(|&(x, y, r)| BaseStation {
                    position: Point::new(x, y),
                    offset: d0 - r,
                })
                .collect(),
            charging: vec![],
            u0: Point::new(0.0, 0.0),
            uf: Point::new(0.0, 0.0),
            altitude: 100.0,
            cs_altitude: 100.0,
        }
    }

    fn approx(p: Point, x: f64, y: f64) -> bool {
        (p.x - x).abs() < 1e-12 && (p.y - y).abs() < 1e-12
    }

    #[test]
    fn tangent_circles_meet_once() {
        let pts = circle_intersections(Point::new(0.0, 0.0), 1.0, Point::new(2.0, 0.0), 1.0, TANGENCY_REL_TOL);
        assert_eq!(pts.len(), 1);
        assert!(approx(pts[0], 1.0, 0.0));
    }

    #[test]
    fn overlapping_unit_circles() {
        let pts = circle_intersections(Point::new(0.0, 0.0), 1.0, Point::new(1.0, 0.0), 1.0, TANGENCY_REL_TOL);
        assert_eq!(pts.len(), 2);
        let h = 3f64.sqrt() / 2.0;
        assert!(approx(pts[0], 0.5, -h));
        assert!(approx(pts[1], 0.5, h));
    }

    #[test]
    fn concentric_disjoint_nested_circles() {
        let o = Point::new(3.0, 4.0);
        assert!(circle_intersections(o, 1.0, o, 1.0, TANGENCY_REL_TOL).is_empty());
        assert!(circle_intersections(o, 1.0, o, 2.0, TANGENCY_REL_TOL).is_empty());
        assert!(circle_intersections(o, 1.0, Point::new(10.0, 4.0), 1.0, TANGENCY_REL_TOL).is_empty());
        assert!(circle_intersections(o, 5.0, Point::new(4.0, 4.0), 1.0, TANGENCY_REL_TOL).is_empty());
    }

    #[test]
    fn chord_of_unit_disk() {
        let map = map_of(&[(0.0, 0.0, 1.0)]);
        let iv = segment_coverage_intervals(Point::new(-2.0, 0.0), Point::new(2.0, 0.0), &map);
        assert_eq!(iv.len(), 1);
        assert!((iv[0].lo - 0.25).abs() < 1e-9);
        assert!((iv[0].hi - 0.75).abs() < 1e-9);
        assert!(segment_outage(Point::new(-2.0, 0.0), Point::new(2.0, 0.0), &map));
    }

    #[test]
    fn contained_segment() {
        let map = map_of(&[(0.0, 0.0, 10.0)]);
        let iv = segment_coverage_intervals(Point::new(-3.0, 1.0), Point::new(4.0, -2.0), &map);
        assert_eq!(iv, vec![CoverageInterval { lo: 0.0, hi: 1.0 }]);
        assert!(!segment_outage(Point::new(-3.0, 1.0), Point::new(4.0, -2.0), &map));
    }

    #[test]
    fn zero_radius_stations_give_no_chords() {
        let map = map_of(&[(0.0, 0.0, 0.0), (5.0, 5.0, 0.0)]);
        let iv = segment_coverage_intervals(Point::new(1.0, 0.0), Point::new(1.0, 3.0), &map);
        assert!(iv.is_empty());
        assert!(is_covered(Point::new(0.0, 0.0), &map));
    }

    #[test]
    fn touching_chords_merge() {
        // chords [0, 0.5] and [0.5, 1]
        let map = map_of(&[(0.0, 0.0, 1.0), (2.0, 0.0, 1.0)]);
        let a = Point::new(-1.0, 0.0);
        let b = Point::new(3.0, 0.0);
        let iv = segment_coverage_intervals(a, b, &map);
        assert_eq!(iv.len(), 1);
        assert!(!segment_outage(a, b, &map));
        // sampling oracle agrees
        for k in 0..=10_000 {
            let p = a.lerp(b, k as f64 / 10_000.0);
            assert!(is_covered(p, &map));
        }
    }

    #[test]
    fn gap_between_chords_is_outage() {
        // coverage [0, xi1] and [xi1 - delta, xi2] with xi2 < 1
        let map = map_of(&[(0.0, 0.0, 2.0), (3.0, 0.0, 1.5)]);
        let a = Point::new(0.0, 0.0);
        let b = Point::new(6.0, 0.0);
        let iv = segment_coverage_intervals(a, b, &map);
        assert_eq!(iv.len(), 1);
        assert!(iv[0].lo == 0.0 && iv[0].hi < 1.0);
        assert!(segment_outage(a, b, &map));
        assert!(segment_outage(b, a, &map));
    }

    #[test]
    fn nested_disks_cover_through_union() {
        let map = map_of(&[(0.0, 0.0, 10.0), (1.0, 0.0, 2.0)]);
        assert!(
            circle_intersections(Point::new(0.0, 0.0), 10.0, Point::new(1.0, 0.0), 2.0, TANGENCY_REL_TOL).is_empty()
        );
        assert!(!segment_outage(Point::new(1.0, 1.5), Point::new(-8.0, 0.0), &map));
    }

    #[test]
    fn connectivity_cases() {
        let one = map_of(&[(0.0, 0.0, 5.0)]);
        assert!(coverage_connected(Point::new(1.0, 1.0), Point::new(-2.0, 3.0), &one));

        let apart = map_of(&[(0.0, 0.0, 1.0), (5.0, 0.0, 1.0)]);
        assert!(!coverage_connected(Point::new(0.0, 0.0), Point::new(5.0, 0.0), &apart));
        assert!(!coverage_connected(Point::new(0.0, 3.0), Point::new(0.0, 0.0), &apart));

        let chain = map_of(&[(0.0, 0.0, 10.0), (15.0, 0.0, 10.0), (30.0, 0.0, 10.0)]);
        let p = Point::new(-5.0, 0.0);
        let q = Point::new(35.0, 0.0);
        assert!(coverage_connected(p, q, &chain));
        assert!(lattice_flood_fill(&chain, p, q, 1.0));
    }

    /// Connectivity oracle: 4-neighbour flood fill over covered lattice points.
    fn lattice_flood_fill(map: &NetworkMap, p: Point, q: Point, step: f64) -> bool {
        use std::collections::HashSet;
        let key = |pt: Point| ((pt.x / step).round() as i64, (pt.y / step).round() as i64);
        let at = |k: (i64, i64)| Point::new(k.0 as f64 * step, k.1 as f64 * step);
        let (s, t) = (key(p), key(q));
        let mut seen = HashSet::from([s]);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                return true;
            }
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let v = (u.0 + dx, u.1 + dy);
                if is_covered(at(v), map) && seen.insert(v) {
                    queue.push_back(v);
                }
            }
        }
        false
    }
}
