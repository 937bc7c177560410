//! Static SVG view of a map and, optionally, a trajectory.

use std::fmt::Write;

use covroute::{NetworkMap, Point, Step, Trajectory};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 0.05;

struct Frame {
    min: Point,
    max: Point,
    scale: f64,
}

impl Frame {
    fn new(map: &NetworkMap, traj: Option<&Trajectory>) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: Point, r: f64| {
            lo = Point::new(lo.x.min(p.x - r), lo.y.min(p.y - r));
            hi = Point::new(hi.x.max(p.x + r), hi.y.max(p.y + r));
        };
        for (c, r) in map.disks() {
            grow(c, r);
        }
        for cs in &map.charging {
            grow(cs.position, 0.0);
        }
        grow(map.u0, 0.0);
        grow(map.uf, 0.0);
        if let Some(t) = traj {
            for p in t.waypoints() {
                grow(p, 0.0);
            }
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1.0);
        let pad = span * MARGIN;
        let min = Point::new(lo.x - pad, lo.y - pad);
        let max = Point::new(hi.x + pad, hi.y + pad);
        Frame {
            min,
            max,
            scale: WIDTH / (span + 2.0 * pad),
        }
    }

    /// Screen coordinates, y pointing down.
    fn at(&self, p: Point) -> (f64, f64) {
        ((p.x - self.min.x) * self.scale, (self.max.y - p.y) * self.scale)
    }

    fn height(&self) -> f64 {
        (self.max.y - self.min.y) * self.scale
    }

    fn width(&self) -> f64 {
        (self.max.x - self.min.x) * self.scale
    }
}

pub fn render(map: &NetworkMap, traj: Option<&Trajectory>) -> String {
    let f = Frame::new(map, traj);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}">"#,
        f.width(),
        f.height(),
        f.width(),
        f.height()
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);

    let _ = writeln!(s, r#"<g id="coverage">"#);
    for (c, r) in map.disks() {
        let (x, y) = f.at(c);
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="#4a90d9" fill-opacity="0.15" stroke="#4a90d9" stroke-width="1"/>"##,
            r * f.scale
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="stations">"#);
    for bs in &map.stations {
        let (x, y) = f.at(bs.position);
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="6" height="6" fill="#1f4e79"/>"##,
            x - 3.0,
            y - 3.0
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="charging">"#);
    for (n, cs) in map.charging.iter().enumerate() {
        let (x, y) = f.at(cs.position);
        let fill = if cs.is_available() { "#2e8b57" } else { "#999999" };
        let _ = writeln!(
            s,
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}"/>"#,
            x,
            y - 6.0,
            x - 5.0,
            y + 4.0,
            x + 5.0,
            y + 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">C{}</text>"#,
            x + 6.0,
            y - 6.0,
            n + 1
        );
    }
    let _ = writeln!(s, "</g>");

    if let Some(t) = traj {
        let pts = t.waypoints();
        if !pts.is_empty() {
            let list: Vec<String> = pts
                .iter()
                .map(|&p| {
                    let (x, y) = f.at(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let _ = writeln!(
                s,
                r##"<polyline id="trajectory" points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
                list.join(" ")
            );
        }
        let _ = writeln!(s, r#"<g id="swaps">"#);
        for step in &t.steps {
            if let Step::Swap(e) = step {
                if let Some(cs) = map.charging.get(e.station) {
                    let (x, y) = f.at(cs.position);
                    let _ = writeln!(
                        s,
                        r##"<circle cx="{x:.2}" cy="{y:.2}" r="8" fill="none" stroke="#ff7f0e" stroke-width="2"/>"##
                    );
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }

    for (label, p) in [("u0", map.u0), ("uF", map.uf)] {
        let (x, y) = f.at(p);
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#000000"/>"##);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{label}</text>"#,
            x + 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(s, "</svg>");
    s
}
