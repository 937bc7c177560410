//! Maximum deliverable payload.
//!
//! Only the longest hop a mission cannot avoid matters: the bottleneck is the
//! minimax route length over all start-to-goal sequences of terminals. The
//! payload is then the heaviest candidate that still crosses it on one
//! battery.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::battery::{chk_sp, local_routes};
use crate::error::{Error, Result};
use crate::map::NetworkMap;
use crate::model::UavParams;
use crate::trajectory::{LocalRoute, Terminal};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bottleneck {
    pub from: Terminal,
    pub to: Terminal,
    pub length: f64,
}

/// Longest edge whose removal disconnects start from goal, found by deleting
/// the longest remaining edge until that happens. `None` if start and goal
/// are not connected at all.
pub fn bottleneck_edge(routes: &[LocalRoute]) -> Option<Bottleneck> {
    let mut nodes: Vec<Terminal> = vec![Terminal::Start, Terminal::Goal];
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let node = |t: Terminal, nodes: &mut Vec<Terminal>| match nodes.iter().position(|&x| x == t) {
        Some(i) => i,
        None => {
            nodes.push(t);
            nodes.len() - 1
        }
    };
    for r in routes {
        if !r.has_path() || r.from == r.to {
            continue;
        }
        let (a, b) = (node(r.from, &mut nodes), node(r.to, &mut nodes));
        let (a, b) = (a.min(b), a.max(b));
        if !edges.iter().any(|&(x, y, _)| x == a && y == b) {
            edges.push((a, b, r.length));
        }
    }
    if !connected(nodes.len(), &edges, 0, 1) {
        return None;
    }
    // stable: equal lengths are removed in insertion order
    edges.sort_by(|x, y| y.2.total_cmp(&x.2));
    let mut alive = edges.clone();
    for e in &edges {
        alive.remove(0);
        if !connected(nodes.len(), &alive, 0, 1) {
            return Some(Bottleneck {
                from: nodes[e.0],
                to: nodes[e.1],
                length: e.2,
            });
        }
    }
    unreachable!("start and goal were connected with every edge present")
}

fn connected(n: usize, edges: &[(usize, usize, f64)], s: usize, t: usize) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayloadQuery {
    /// Payload step (kg).
    pub eps_w: f64,
    pub k_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayloadResult {
    /// Whether the empty UAV can make the trip at all.
    pub feasible: bool,
    /// Heaviest deliverable payload (kg).
    pub w3: Option<f64>,
    pub bottleneck: Option<Bottleneck>,
}

/// Heaviest `w3` in `{0, eps_w, ..., k_max * eps_w}` that can cross the
/// bottleneck. The UAV's own `w3` is ignored.
pub fn max_payload(map: &NetworkMap, uav: &UavParams, q: &PayloadQuery) -> Result<PayloadResult> {
    if !(q.eps_w.is_finite() && q.eps_w > 0.0) {
        return Err(Error::param(
            "eps_w",
            format!("must be finite and > 0, got {}", q.eps_w),
        ));
    }
    if q.k_max < 1 {
        return Err(Error::param("k_max", "must be >= 1"));
    }
    let routes = local_routes(map, uav)?;
    Ok(payload_from_routes(&routes, uav, q))
}

/// [`max_payload`] over precomputed local routes.
pub fn payload_from_routes(routes: &[LocalRoute], uav: &UavParams, q: &PayloadQuery) -> PayloadResult {
    let bottleneck = bottleneck_edge(routes);
    let Some(b) = bottleneck else {
        return PayloadResult {
            feasible: false,
            w3: None,
            bottleneck,
        };
    };
    let crosses = |w3: f64| chk_sp(b.length, &uav.with_payload(w3)).0;
    let best = if crosses(0.0) {
        (0..=q.k_max).map(|k| f64::from(k) * q.eps_w).rfind(|&w3| crosses(w3))
    } else {
        None
    };
    PayloadResult {
        feasible: best.is_some(),
        w3: best,
        bottleneck,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn route(from: Terminal, to: Terminal, length: f64) -> LocalRoute {
        LocalRoute {
            from,
            to,
            connected: true,
            length,
            path: Vec::new(),
            v_max: None,
        }
    }

    use Terminal::{Goal, Start, Station};

    #[test]
    fn single_edge() {
        let b = bottleneck_edge(&[route(Start, Goal, 7.0)]).unwrap();
        assert_eq!((b.from, b.to, b.length), (Start, Goal, 7.0));
    }

    #[test]
    fn two_parallel_routes() {
        let routes = [
            route(Start, Station(0), 5.0),
            route(Station(0), Goal, 3.0),
            route(Start, Station(1), 9.0),
            route(Station(1), Goal, 1.0),
        ];
        assert_eq!(bottleneck_edge(&routes).unwrap().length, 5.0);
    }

    #[test]
    fn disconnected() {
        let mut r = route(Start, Goal, 1.0);
        r.connected = false;
        assert!(bottleneck_edge(&[r.clone(), route(Start, Station(0), 2.0)]).is_none());
        let q = PayloadQuery { eps_w: 0.1, k_max: 10 };
        let p = payload_from_routes(&[r], &UavParams::reference(), &q);
        assert!(!p.feasible && p.w3.is_none());
    }

    #[test]
    fn tiny_bottleneck_hits_the_cap() {
        let q = PayloadQuery { eps_w: 0.1, k_max: 20 };
        let p = payload_from_routes(&[route(Start, Goal, 1e-3)], &UavParams::reference(), &q);
        assert!(p.feasible);
        assert!((p.w3.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_is_tight() {
        let uav = UavParams::reference();
        let q = PayloadQuery {
            eps_w: 0.05,
            k_max: 200,
        };
        let p = payload_from_routes(&[route(Start, Goal, 4000.0)], &uav, &q);
        let w3 = p.w3.unwrap();
        assert!(chk_sp(4000.0, &uav.with_payload(w3)).0);
        assert!(!chk_sp(4000.0, &uav.with_payload(w3 + q.eps_w)).0);
    }

    #[test]
    fn empty_uav_cannot_cross() {
        let q = PayloadQuery { eps_w: 0.1, k_max: 5 };
        let p = payload_from_routes(&[route(Start, Goal, 1e5)], &UavParams::reference(), &q);
        assert!(!p.feasible);
        assert_eq!(p.bottleneck.unwrap().length, 1e5);
    }
}
