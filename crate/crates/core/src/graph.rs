//! Deterministic weighted graphs shared by the local and global search levels.
//!
//! Among several minimum-weight paths, [`dijkstra`] returns the one whose
//! vertex-index sequence is lexicographically smallest, so results do not
//! depend on edge insertion order.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::ops::Add;

use crate::error::{Error, Result};

/// Edge weight usable by [`dijkstra`]: a totally ordered, non-negative
/// additive quantity.
pub trait Weight: Copy + PartialOrd + Add<Output = Self> + std::fmt::Debug {
    fn zero() -> Self;
    /// Finite and not below zero.
    fn is_admissible(&self) -> bool;
}

impl Weight for f64 {
    fn zero() -> Self {
        0.0
    }

    fn is_admissible(&self) -> bool {
        self.is_finite() && *self >= 0.0
    }
}

/// Objective value with a hop counter as secondary key. Used where equal
/// objectives must prefer fewer intermediate stops.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Lexi {
    pub value: f64,
    pub hops: u32,
}

impl Add for Lexi {
    type Output = Lexi;
    fn add(self, o: Lexi) -> Lexi {
        Lexi {
            value: self.value + o.value,
            hops: self.hops + o.hops,
        }
    }
}

impl Weight for Lexi {
    fn zero() -> Self {
        Lexi { value: 0.0, hops: 0 }
    }

    fn is_admissible(&self) -> bool {
        self.value.is_admissible()
    }
}

#[derive(Debug, Clone)]
pub struct PlanGraph<K, W = f64> {
    vertices: Vec<K>,
    adjacency: Vec<Vec<(usize, W)>>,
    directed: bool,
    edge_count: usize,
}

impl<K, W: Weight> PlanGraph<K, W> {
    pub fn new(vertices: Vec<K>, directed: bool) -> Self {
        let n = vertices.len();
        PlanGraph {
            vertices,
            adjacency: vec![Vec::new(); n],
            directed,
            edge_count: 0,
        }
    }

    pub fn directed(vertices: Vec<K>) -> Self {
        Self::new(vertices, true)
    }

    pub fn undirected(vertices: Vec<K>) -> Self {
        Self::new(vertices, false)
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: W) -> Result<()> {
        let n = self.vertices.len();
        if from >= n || to >= n {
            return Err(Error::InvalidGraph(format!(
                "edge ({from}, {to}) out of range for {n} vertices"
            )));
        }
        if !weight.is_admissible() {
            return Err(Error::InvalidGraph(format!(
                "edge ({from}, {to}) has inadmissible weight {weight:?}"
            )));
        }
        self.adjacency[from].push((to, weight));
        if !self.directed && from != to {
            self.adjacency[to].push((from, weight));
        }
        self.edge_count += 1;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex(&self, i: usize) -> &K {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[K] {
        &self.vertices
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, W)] {
        &self.adjacency[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPath<W> {
    pub weight: W,
    pub vertices: Vec<usize>,
}

struct Entry<W> {
    dist: W,
    vertex: usize,
}

impl<W: PartialOrd> PartialEq for Entry<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<W: PartialOrd> Eq for Entry<W> {}

impl<W: PartialOrd> PartialOrd for Entry<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: PartialOrd> Ord for Entry<W> {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .partial_cmp(&self.dist)
            .expect("admissible weights are totally ordered")
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

fn trace(pred: &[Option<usize>], source: usize, v: usize) -> Vec<usize> {
    let mut path = vec![v];
    let mut cur = v;
    while cur != source {
        cur = pred[cur].expect("settled vertex has a predecessor");
        path.push(cur);
    }
    path.reverse();
    path
}

/// Minimum-weight path from `source` to `target`, or `None` when `target`
/// is unreachable. Ties resolve to the lexicographically smallest sequence
/// of vertex indices.
pub fn dijkstra<K, W: Weight>(g: &PlanGraph<K, W>, source: usize, target: usize) -> Option<ShortestPath<W>> {
    let n = g.vertex_count();
    assert!(source < n && target < n, "vertex out of range");
    let mut dist: Vec<Option<W>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(W::zero());
    heap.push(Entry {
        dist: W::zero(),
        vertex: source,
    });
    while let Some(Entry { dist: d, vertex: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        if u == target {
            break;
        }
        for &(v, w) in g.neighbors(u) {
            if settled[v] {
                continue;
            }
            let cand = d + w;
            let better = match dist[v] {
                None => true,
                Some(cur) => match cand.partial_cmp(&cur).expect("ordered weights") {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        let p = pred[v].expect("reached vertex has a predecessor");
                        if p == u {
                            false
                        } else {
                            let mut via_u = trace(&pred, source, u);
                            let mut via_p = trace(&pred, source, p);
                            via_u.push(v);
                            via_p.push(v);
                            via_u < via_p
                        }
                    }
                },
            };
            if better {
                let improved = dist[v].is_none_or(|cur| cand < cur);
                dist[v] = Some(cand);
                pred[v] = Some(u);
                if improved {
                    heap.push(Entry { dist: cand, vertex: v });
                }
            }
        }
    }
    let weight = dist[target]?;
    Some(ShortestPath {
        weight,
        vertices: trace(&pred, source, target),
    })
}

/// Whether `target` can be reached from `source` along edge directions.
pub fn bfs_reachable<K, W: Weight>(g: &PlanGraph<K, W>, source: usize, target: usize) -> bool {
    let n = g.vertex_count();
    assert!(source < n && target < n, "vertex out of range");
    let mut seen = vec![false; n];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        if u == target {
            return true;
        }
        for &(v, _) in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    false
}
