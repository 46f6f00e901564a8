//! Partially directed graphs over window vertices, the four-valued edge
//! query, and the rule engine that closes orientations.

use crate::error::{DiscoveryError, GraphError};
use crate::unrolled::{UnrolledGraph, Vertex};

/// Status of the edge between two queried vertices, relative to argument
/// order: `Forward` means first -> second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Forward,
    Backward,
    Absent,
    Undirected,
}

const ABSENT: u8 = 0;
const OUT: u8 = 1; // row -> col
const IN: u8 = 2; // col -> row
const UNDIR: u8 = 3;

/// Partially directed graph over `n_series * window_len` vertices.
///
/// Directed and undirected edges are disjoint and at most one edge of either
/// kind joins a vertex pair. All lagged edges are kept directed past
/// -> present by the constructors in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pdag {
    n_series: u32,
    window_len: u32,
    state: Vec<u8>,
}

impl Pdag {
    pub fn new(n_series: u32, window_len: u32) -> Self {
        let nv = (n_series * window_len) as usize;
        Pdag {
            n_series,
            window_len,
            state: vec![ABSENT; nv * nv],
        }
    }

    /// Skeleton of an unrolled graph with every edge left undirected.
    pub fn undirected_skeleton(g: &UnrolledGraph) -> Self {
        let mut p = Pdag::new(g.n_series(), g.window_len());
        for u in 0..g.n_vertices() {
            for &v in g.child_ids(u) {
                p.set(u, v, UNDIR);
                p.set(v, u, UNDIR);
            }
        }
        p
    }

    /// Complete undirected graph over the window's vertices.
    pub fn complete(n_series: u32, window_len: u32) -> Self {
        let mut p = Pdag::new(n_series, window_len);
        for u in 0..p.n_vertices() {
            for v in 0..u {
                p.set(u, v, UNDIR);
                p.set(v, u, UNDIR);
            }
        }
        p
    }

    #[inline]
    pub fn n_series(&self) -> u32 {
        self.n_series
    }

    #[inline]
    pub fn window_len(&self) -> u32 {
        self.window_len
    }

    #[inline]
    pub fn n_vertices(&self) -> u32 {
        self.n_series * self.window_len
    }

    #[inline]
    pub fn vertex_id(&self, v: Vertex) -> u32 {
        v.slice * self.n_series + v.series.0
    }

    #[inline]
    pub fn vertex_of(&self, id: u32) -> Vertex {
        Vertex {
            series: crate::template::SeriesId(id % self.n_series),
            slice: id / self.n_series,
        }
    }

    #[inline]
    fn cell(&self, u: u32, v: u32) -> u8 {
        self.state[u as usize * self.n_vertices() as usize + v as usize]
    }

    #[inline]
    fn set(&mut self, u: u32, v: u32, s: u8) {
        let nv = self.n_vertices() as usize;
        self.state[u as usize * nv + v as usize] = s;
    }

    fn check_vertex(&self, v: Vertex) -> Result<u32, GraphError> {
        if v.series.0 >= self.n_series || v.slice >= self.window_len {
            return Err(GraphError::VertexOutOfRange {
                series: v.series.0,
                slice: v.slice,
                n_series: self.n_series,
                window_len: self.window_len,
            });
        }
        Ok(self.vertex_id(v))
    }

    /// Four-valued edge status between `x` and `y`.
    pub fn orient_query(&self, x: Vertex, y: Vertex) -> Result<Orientation, GraphError> {
        let u = self.check_vertex(x)?;
        let v = self.check_vertex(y)?;
        if u == v {
            return Err(GraphError::DegeneratePair);
        }
        Ok(match self.cell(u, v) {
            OUT => Orientation::Forward,
            IN => Orientation::Backward,
            UNDIR => Orientation::Undirected,
            _ => Orientation::Absent,
        })
    }

    #[inline]
    pub(crate) fn is_adjacent(&self, u: u32, v: u32) -> bool {
        self.cell(u, v) != ABSENT
    }

    #[inline]
    pub(crate) fn is_directed(&self, from: u32, to: u32) -> bool {
        self.cell(from, to) == OUT
    }

    #[inline]
    pub(crate) fn is_undirected(&self, u: u32, v: u32) -> bool {
        self.cell(u, v) == UNDIR
    }

    pub(crate) fn insert_undirected(&mut self, u: u32, v: u32) {
        debug_assert_eq!(self.cell(u, v), ABSENT);
        self.set(u, v, UNDIR);
        self.set(v, u, UNDIR);
    }

    pub(crate) fn insert_directed(&mut self, from: u32, to: u32) {
        debug_assert_eq!(self.cell(from, to), ABSENT);
        self.set(from, to, OUT);
        self.set(to, from, IN);
    }

    pub(crate) fn remove_edge(&mut self, u: u32, v: u32) {
        self.set(u, v, ABSENT);
        self.set(v, u, ABSENT);
    }

    /// Turn an existing edge into `from -> to`.
    ///
    /// Fails on absent edges and on edges already directed the other way;
    /// both signal contradictory knowledge upstream.
    pub(crate) fn direct(&mut self, from: u32, to: u32) -> Result<bool, DiscoveryError> {
        match self.cell(from, to) {
            UNDIR => {
                self.set(from, to, OUT);
                self.set(to, from, IN);
                Ok(true)
            }
            OUT => Ok(false),
            IN => Err(DiscoveryError::Inconsistent {
                detail: format!(
                    "edge between vertices {from} and {to} is forced in both directions"
                ),
            }),
            _ => Err(DiscoveryError::Inconsistent {
                detail: format!("no edge between vertices {from} and {to} to orient"),
            }),
        }
    }

    /// Neighbor ids of `u` (any edge kind), ascending.
    pub(crate) fn neighbor_ids(&self, u: u32) -> Vec<u32> {
        (0..self.n_vertices())
            .filter(|&v| v != u && self.is_adjacent(u, v))
            .collect()
    }

    /// Directed edges as vertex pairs in canonical order.
    pub fn directed_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n_vertices() {
            for v in 0..self.n_vertices() {
                if self.cell(u, v) == OUT {
                    out.push((self.vertex_of(u), self.vertex_of(v)));
                }
            }
        }
        out
    }

    /// Undirected edges with endpoints in canonical order.
    pub fn undirected_edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n_vertices() {
            for v in (u + 1)..self.n_vertices() {
                if self.cell(u, v) == UNDIR {
                    out.push((self.vertex_of(u), self.vertex_of(v)));
                }
            }
        }
        out
    }

    pub(crate) fn undirected_edge_ids(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for u in 0..self.n_vertices() {
            for v in (u + 1)..self.n_vertices() {
                if self.cell(u, v) == UNDIR {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Largest slice distance spanned by any edge.
    pub fn max_lag(&self) -> u32 {
        let mut best = 0;
        for u in 0..self.n_vertices() {
            for v in (u + 1)..self.n_vertices() {
                if self.cell(u, v) != ABSENT {
                    let ku = u / self.n_series;
                    let kv = v / self.n_series;
                    best = best.max(kv - ku); // u < v implies ku <= kv
                }
            }
        }
        best
    }

    /// True when directed edges contain no cycle.
    pub fn directed_part_acyclic(&self) -> bool {
        let nv = self.n_vertices();
        let mut indeg = vec![0u32; nv as usize];
        for u in 0..nv {
            for v in 0..nv {
                if self.cell(u, v) == OUT {
                    indeg[v as usize] += 1;
                }
            }
        }
        let mut queue: Vec<u32> = (0..nv).filter(|&v| indeg[v as usize] == 0).collect();
        let mut seen = 0;
        while let Some(u) = queue.pop() {
            seen += 1;
            for v in 0..nv {
                if self.cell(u, v) == OUT {
                    indeg[v as usize] -= 1;
                    if indeg[v as usize] == 0 {
                        queue.push(v);
                    }
                }
            }
        }
        seen == nv
    }

    /// Equality restricted to edges whose endpoints both sit at slices
    /// `>= gamma` from the left boundary.
    pub fn interior_eq(&self, other: &Pdag, gamma: u32) -> bool {
        if self.n_series != other.n_series || self.window_len != other.window_len {
            return false;
        }
        let nv = self.n_vertices();
        for u in 0..nv {
            if u / self.n_series < gamma {
                continue;
            }
            for v in 0..nv {
                if v / self.n_series < gamma {
                    continue;
                }
                if self.cell(u, v) != other.cell(u, v) {
                    return false;
                }
            }
        }
        true
    }
}

/// Which orientation rules the closure applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSet {
    /// Only the chain rule (rule 1).
    FirstOnly,
    /// All four standard rules.
    All,
}

/// Fixpoint of the orientation rules over a graph's undirected edges.
///
/// `stationarity` additionally copies instantaneous orientations across
/// interior slices (those at least `gamma` from the left boundary).
/// Never removes or reverses an edge; idempotent on its own output.
pub(crate) fn close_orientations(
    p: &mut Pdag,
    rules: RuleSet,
    stationarity: bool,
    gamma: u32,
) -> Result<(), DiscoveryError> {
    loop {
        let mut changed = false;
        for (a, b) in p.undirected_edge_ids() {
            if !p.is_undirected(a, b) {
                continue; // oriented earlier in this pass
            }
            for (x, y) in [(a, b), (b, a)] {
                if !p.is_undirected(x, y) {
                    break;
                }
                if rule_applies(p, rules, x, y) {
                    p.direct(x, y)?;
                    changed = true;
                }
            }
        }
        if stationarity {
            changed |= propagate_stationary(p, gamma)?;
        }
        if !changed {
            if !p.directed_part_acyclic() {
                return Err(DiscoveryError::Inconsistent {
                    detail: "orientation closure produced a directed cycle".into(),
                });
            }
            return Ok(());
        }
    }
}

/// True when some rule orients `x -> y` given the current state.
fn rule_applies(p: &Pdag, rules: RuleSet, x: u32, y: u32) -> bool {
    let x_neighbors = p.neighbor_ids(x);
    // Rule 1: w -> x - y with w, y non-adjacent gives x -> y.
    for &w in &x_neighbors {
        if w != y && p.is_directed(w, x) && !p.is_adjacent(w, y) {
            return true;
        }
    }
    if rules == RuleSet::FirstOnly {
        return false;
    }
    // Rule 2: x -> w -> y with x - y gives x -> y.
    for &w in &x_neighbors {
        if w != y && p.is_directed(x, w) && p.is_directed(w, y) {
            return true;
        }
    }
    // Rule 3: x - c, x - d, c -> y, d -> y with c, d non-adjacent gives x -> y.
    let into_y: Vec<u32> = x_neighbors
        .iter()
        .copied()
        .filter(|&c| c != y && p.is_undirected(x, c) && p.is_directed(c, y))
        .collect();
    for (i, &c) in into_y.iter().enumerate() {
        for &d in &into_y[i + 1..] {
            if !p.is_adjacent(c, d) {
                return true;
            }
        }
    }
    // Rule 4: x - c, c -> w -> y with c, y non-adjacent gives x -> y.
    for &c in &x_neighbors {
        if c == y || !p.is_undirected(x, c) || p.is_adjacent(c, y) {
            continue;
        }
        for w in 0..p.n_vertices() {
            if p.is_directed(c, w) && p.is_directed(w, y) {
                return true;
            }
        }
    }
    false
}

/// Copy instantaneous orientations across interior slices.
fn propagate_stationary(p: &mut Pdag, gamma: u32) -> Result<bool, DiscoveryError> {
    let n = p.n_series();
    let mut changed = false;
    for (u, v) in p.directed_edges() {
        if u.slice != v.slice || u.slice < gamma {
            continue;
        }
        for k in gamma..p.window_len() {
            let a = k * n + u.series.0;
            let b = k * n + v.series.0;
            if p.is_undirected(a, b) {
                changed |= p.direct(a, b)?;
            } else if p.is_directed(b, a) {
                return Err(DiscoveryError::Inconsistent {
                    detail: format!(
                        "instantaneous edge between series {} and {} oriented differently at interior slices",
                        u.series.0, v.series.0
                    ),
                });
            }
        }
    }
    Ok(changed)
}

/// Representative of the Markov equivalence class of an unrolled DAG.
///
/// An edge is directed in the result iff every acyclic orientation of the
/// skeleton with the same unshielded colliders agrees on it; computed as
/// collider orientation plus rule closure. No temporal or summary-graph
/// knowledge is applied here.
pub fn dag_to_cpdag(g: &UnrolledGraph) -> Pdag {
    let mut p = Pdag::undirected_skeleton(g);
    // Unshielded colliders keep their arrowheads.
    for v in 0..g.n_vertices() {
        let pa = g.parent_ids(v);
        for (i, &p1) in pa.iter().enumerate() {
            for &p2 in &pa[i + 1..] {
                if !g.adjacent_ids(p1, p2) {
                    let _ = p.direct(p1, v);
                    let _ = p.direct(p2, v);
                }
            }
        }
    }
    // Rule closure cannot fail here: every orientation is sound for the
    // equivalence class of an actual DAG.
    close_orientations(&mut p, RuleSet::All, false, 0)
        .expect("closure over a DAG's equivalence class is consistent");
    p
}
