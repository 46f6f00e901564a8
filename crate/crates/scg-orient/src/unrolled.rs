//! Finite-window expansion of a template and d-separation over it.
//!
//! Slices are indexed `0..window_len`, growing toward the present: slice
//! `window_len - 1` is "now" and slice 0 has a truncated past. Vertices are
//! ordered by (slice, series); that order is used for all deterministic
//! iteration and tie-breaking.

use crate::error::GraphError;
use crate::template::{SeriesId, TemplateGraph};

/// A variable at one time slice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub series: SeriesId,
    pub slice: u32,
}

impl Vertex {
    pub fn new(series: u32, slice: u32) -> Self {
        Vertex {
            series: SeriesId(series),
            slice,
        }
    }
}

/// Explicit finite-window DAG obtained by repeating a template.
///
/// Immutable after construction; an edge `(s, k-l) -> (s', k)` exists iff the
/// template has `(s, l, s')` and `k - l >= 0`.
#[derive(Debug, Clone)]
pub struct UnrolledGraph {
    template: TemplateGraph,
    window_len: u32,
    parents: Vec<Vec<u32>>,
    children: Vec<Vec<u32>>,
    adjacent: Vec<bool>,
}

/// Expand `template` over a window of `window_len` slices.
///
/// Fails when the window cannot hold the template's longest lag.
pub fn unroll(template: &TemplateGraph, window_len: u32) -> Result<UnrolledGraph, GraphError> {
    let required = template.gamma_max() + 1;
    if window_len < required {
        return Err(GraphError::WindowTooSmall {
            window_len,
            required,
        });
    }
    let n = template.n_series();
    let nv = (n * window_len) as usize;
    let mut parents: Vec<Vec<u32>> = vec![Vec::new(); nv];
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); nv];
    let mut adjacent = vec![false; nv * nv];
    for k in 0..window_len {
        for e in template.edges() {
            if k >= e.lag {
                let u = (k - e.lag) * n + e.source.0;
                let v = k * n + e.target.0;
                parents[v as usize].push(u);
                children[u as usize].push(v);
                adjacent[u as usize * nv + v as usize] = true;
                adjacent[v as usize * nv + u as usize] = true;
            }
        }
    }
    for list in parents.iter_mut().chain(children.iter_mut()) {
        list.sort_unstable();
        list.dedup();
    }
    Ok(UnrolledGraph {
        template: template.clone(),
        window_len,
        parents,
        children,
        adjacent,
    })
}

impl UnrolledGraph {
    #[inline]
    pub fn n_series(&self) -> u32 {
        self.template.n_series()
    }

    #[inline]
    pub fn window_len(&self) -> u32 {
        self.window_len
    }

    #[inline]
    pub fn template(&self) -> &TemplateGraph {
        &self.template
    }

    #[inline]
    pub fn n_vertices(&self) -> u32 {
        self.n_series() * self.window_len
    }

    /// Dense index of a vertex; (slice, series) order.
    #[inline]
    pub fn vertex_id(&self, v: Vertex) -> u32 {
        v.slice * self.n_series() + v.series.0
    }

    #[inline]
    pub fn vertex_of(&self, id: u32) -> Vertex {
        Vertex {
            series: SeriesId(id % self.n_series()),
            slice: id / self.n_series(),
        }
    }

    fn check_vertex(&self, v: Vertex) -> Result<u32, GraphError> {
        if v.series.0 >= self.n_series() || v.slice >= self.window_len {
            return Err(GraphError::VertexOutOfRange {
                series: v.series.0,
                slice: v.slice,
                n_series: self.n_series(),
                window_len: self.window_len,
            });
        }
        Ok(self.vertex_id(v))
    }

    #[inline]
    pub(crate) fn parent_ids(&self, id: u32) -> &[u32] {
        &self.parents[id as usize]
    }

    #[inline]
    pub(crate) fn child_ids(&self, id: u32) -> &[u32] {
        &self.children[id as usize]
    }

    /// Adjacency test by dense vertex id (either direction).
    #[inline]
    pub fn adjacent_ids(&self, u: u32, v: u32) -> bool {
        self.adjacent[u as usize * self.n_vertices() as usize + v as usize]
    }

    pub fn has_edge(&self, from: Vertex, to: Vertex) -> Result<bool, GraphError> {
        let u = self.check_vertex(from)?;
        let v = self.check_vertex(to)?;
        Ok(self.children[u as usize].binary_search(&v).is_ok())
    }

    /// Directed edges as (from, to) pairs in canonical order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for u in 0..self.n_vertices() {
            for &v in &self.children[u as usize] {
                out.push((self.vertex_of(u), self.vertex_of(v)));
            }
        }
        out
    }

    pub fn parents(&self, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        let id = self.check_vertex(v)?;
        Ok(self.parents[id as usize]
            .iter()
            .map(|&u| self.vertex_of(u))
            .collect())
    }

    /// Reflexive-transitive closure of children: `v` is its own descendant.
    pub fn descendants(&self, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        let id = self.check_vertex(v)?;
        let mut seen = vec![false; self.n_vertices() as usize];
        let mut stack = vec![id];
        seen[id as usize] = true;
        while let Some(u) = stack.pop() {
            for &c in &self.children[u as usize] {
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        Ok(collect_marked(self, &seen))
    }

    /// All vertices that are not descendants of `v` (in particular, not `v`).
    pub fn non_descendants(&self, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        let desc = self.descendants(v)?;
        let mut marked = vec![true; self.n_vertices() as usize];
        for d in desc {
            marked[self.vertex_id(d) as usize] = false;
        }
        Ok(collect_marked(self, &marked))
    }

    /// Oracle d-separation: true iff no d-connecting path joins `x` and `y`
    /// given conditioning set `z`. Symmetric in `x` and `y`.
    pub fn d_separated(&self, x: Vertex, y: Vertex, z: &[Vertex]) -> Result<bool, GraphError> {
        let xi = self.check_vertex(x)?;
        let yi = self.check_vertex(y)?;
        let mut zi = Vec::with_capacity(z.len());
        for &w in z {
            zi.push(self.check_vertex(w)?);
        }
        zi.sort_unstable();
        zi.dedup();
        if xi == yi || zi.binary_search(&xi).is_ok() || zi.binary_search(&yi).is_ok() {
            return Err(GraphError::OverlappingArguments);
        }
        let mut scratch = DsepScratch::new(self.n_vertices());
        Ok(self.d_separated_ids(&mut scratch, xi, yi, &zi))
    }

    /// Reachability core, reusable scratch for inner loops.
    ///
    /// Preconditions (checked by the public wrapper): distinct endpoints,
    /// conditioning set sorted and disjoint from both.
    pub fn d_separated_ids(&self, s: &mut DsepScratch, x: u32, y: u32, z: &[u32]) -> bool {
        s.reset(self.n_vertices());
        for &w in z {
            s.in_z[w as usize] = true;
        }
        // Ancestors of z (including z itself) activate colliders.
        s.stack_plain.extend_from_slice(z);
        for &w in z {
            s.anc_z[w as usize] = true;
        }
        while let Some(v) = s.stack_plain.pop() {
            for &p in self.parent_ids(v) {
                if !s.anc_z[p as usize] {
                    s.anc_z[p as usize] = true;
                    s.stack_plain.push(p);
                }
            }
        }
        // States: arrived moving toward parents (UP) or from a parent (DOWN).
        const UP: u8 = 1;
        const DOWN: u8 = 2;
        s.stack.push((x, UP));
        while let Some((v, dir)) = s.stack.pop() {
            if v == y {
                return false;
            }
            if s.visited[v as usize] & dir != 0 {
                continue;
            }
            s.visited[v as usize] |= dir;
            let blocked = s.in_z[v as usize];
            if dir == UP && !blocked {
                for &p in self.parent_ids(v) {
                    s.stack.push((p, UP));
                }
                for &c in self.child_ids(v) {
                    s.stack.push((c, DOWN));
                }
            } else if dir == DOWN {
                if !blocked {
                    for &c in self.child_ids(v) {
                        s.stack.push((c, DOWN));
                    }
                }
                if s.anc_z[v as usize] {
                    for &p in self.parent_ids(v) {
                        s.stack.push((p, UP));
                    }
                }
            }
        }
        true
    }
}

fn collect_marked(g: &UnrolledGraph, marked: &[bool]) -> Vec<Vertex> {
    marked
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| g.vertex_of(i as u32))
        .collect()
}

/// Reusable buffers for [`UnrolledGraph::d_separated_ids`].
#[derive(Debug, Default, Clone)]
pub struct DsepScratch {
    in_z: Vec<bool>,
    anc_z: Vec<bool>,
    visited: Vec<u8>,
    stack: Vec<(u32, u8)>,
    stack_plain: Vec<u32>,
}

impl DsepScratch {
    pub fn new(n_vertices: u32) -> Self {
        let n = n_vertices as usize;
        DsepScratch {
            in_z: vec![false; n],
            anc_z: vec![false; n],
            visited: vec![0; n],
            stack: Vec::with_capacity(n),
            stack_plain: Vec::with_capacity(n),
        }
    }

    fn reset(&mut self, n_vertices: u32) {
        let n = n_vertices as usize;
        self.in_z.clear();
        self.in_z.resize(n, false);
        self.anc_z.clear();
        self.anc_z.resize(n, false);
        self.visited.clear();
        self.visited.resize(n, 0);
        self.stack.clear();
        self.stack_plain.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::TemplateGraph;
    use std::collections::BTreeSet;

    fn v(series: u32, slice: u32) -> Vertex {
        Vertex::new(series, slice)
    }

    #[test]
    fn unroll_lagged_pair() {
        // X->Y lag 1, Y->Y lag 1 over two slices.
        let t = TemplateGraph::from_triples(2, [(0, 1, 1), (1, 1, 1)]).unwrap();
        let g = unroll(&t, 2).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert!(g.has_edge(v(0, 0), v(1, 1)).unwrap());
        assert!(g.has_edge(v(1, 0), v(1, 1)).unwrap());
        assert_eq!(g.edges().len(), 2);
    }

    #[test]
    fn unroll_empty_template() {
        let t = TemplateGraph::from_triples(4, []).unwrap();
        let g = unroll(&t, 3).unwrap();
        assert_eq!(g.n_vertices(), 12);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn unroll_mixed_lags() {
        // X->Y lag 0, X->X lag 1 over three slices.
        let t = TemplateGraph::from_triples(2, [(0, 0, 1), (0, 1, 0)]).unwrap();
        let g = unroll(&t, 3).unwrap();
        let expected: BTreeSet<(Vertex, Vertex)> = [
            (v(0, 0), v(1, 0)),
            (v(0, 1), v(1, 1)),
            (v(0, 2), v(1, 2)),
            (v(0, 0), v(0, 1)),
            (v(0, 1), v(0, 2)),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<(Vertex, Vertex)> = g.edges().into_iter().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn window_too_small_names_minimum() {
        let t = TemplateGraph::from_triples(2, [(0, 2, 1)]).unwrap();
        let err = unroll(&t, 2).unwrap_err();
        assert_eq!(
            err,
            GraphError::WindowTooSmall {
                window_len: 2,
                required: 3
            }
        );
    }

    #[test]
    fn kinship_on_instantaneous_chain() {
        // (X,0) -> (Y,0) -> (Z,0)
        let t = TemplateGraph::from_triples(3, [(0, 0, 1), (1, 0, 2)]).unwrap();
        let g = unroll(&t, 1).unwrap();
        assert_eq!(g.parents(v(2, 0)).unwrap(), vec![v(1, 0)]);
        assert_eq!(
            g.descendants(v(0, 0)).unwrap(),
            vec![v(0, 0), v(1, 0), v(2, 0)]
        );
        assert!(!g.non_descendants(v(0, 0)).unwrap().contains(&v(0, 0)));
        assert!(matches!(
            g.parents(v(0, 7)),
            Err(GraphError::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn parents_with_self_loop() {
        // X->Y lag 0 and Y->Y lag 1: parents of (Y,1) are (X,1) and (Y,0).
        let t = TemplateGraph::from_triples(2, [(0, 0, 1), (1, 1, 1)]).unwrap();
        let g = unroll(&t, 2).unwrap();
        assert_eq!(g.parents(v(1, 1)).unwrap(), vec![v(1, 0), v(0, 1)]);
    }

    #[test]
    fn dsep_collider_and_chain() {
        // Collider (X,0) -> (Z,0) <- (Y,0).
        let t = TemplateGraph::from_triples(3, [(0, 0, 2), (1, 0, 2)]).unwrap();
        let g = unroll(&t, 1).unwrap();
        assert!(g.d_separated(v(0, 0), v(1, 0), &[]).unwrap());
        assert!(!g.d_separated(v(0, 0), v(1, 0), &[v(2, 0)]).unwrap());
        // Chain (X,0) -> (Y,0) -> (Z,0).
        let t = TemplateGraph::from_triples(3, [(0, 0, 1), (1, 0, 2)]).unwrap();
        let g = unroll(&t, 1).unwrap();
        assert!(g.d_separated(v(0, 0), v(2, 0), &[v(1, 0)]).unwrap());
        assert!(!g.d_separated(v(0, 0), v(2, 0), &[]).unwrap());
    }

    #[test]
    fn dsep_rejects_overlapping_arguments() {
        let t = TemplateGraph::from_triples(2, [(0, 0, 1)]).unwrap();
        let g = unroll(&t, 1).unwrap();
        let err = g.d_separated(v(0, 0), v(1, 0), &[v(0, 0)]).unwrap_err();
        assert_eq!(err, GraphError::OverlappingArguments);
    }

    #[test]
    fn unroll_injective_on_two_series_templates() {
        // All templates over 2 series with lags <= 1 unroll to distinct graphs
        // at a fixed window.
        let candidates = [(0, 0, 1), (1, 0, 0), (0, 1, 1), (1, 1, 0), (0, 1, 0), (1, 1, 1)];
        let mut seen: BTreeSet<Vec<(Vertex, Vertex)>> = BTreeSet::new();
        let mut total = 0usize;
        for mask in 0u32..(1 << candidates.len()) {
            let triples = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &t)| t);
            if let Ok(t) = TemplateGraph::from_triples(2, triples) {
                total += 1;
                let g = unroll(&t, 3).unwrap();
                assert!(seen.insert(g.edges()), "two templates unrolled equally");
            }
        }
        assert_eq!(total, 48); // 2^6 minus the 16 with a lag-0 two-cycle
    }

    #[test]
    fn markov_condition_holds() {
        // Every vertex is d-separated from its non-descendants given its
        // parents (skipping members of the conditioning set).
        let t = TemplateGraph::from_triples(3, [(0, 0, 1), (1, 1, 2), (2, 1, 2), (0, 1, 0)])
            .unwrap();
        let g = unroll(&t, 4).unwrap();
        for id in 0..g.n_vertices() {
            let x = g.vertex_of(id);
            let pa = g.parents(x).unwrap();
            for y in g.non_descendants(x).unwrap() {
                if pa.contains(&y) {
                    continue;
                }
                assert!(
                    g.d_separated(x, y, &pa).unwrap(),
                    "{x:?} not separated from {y:?} by its parents"
                );
            }
        }
    }
}
