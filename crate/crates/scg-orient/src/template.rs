//! Stationary edge templates: the finite description of a repeating causal
//! structure over time series.
//!
//! A template lists edges of the form (source series, lag, target series),
//! read as "the source, `lag` steps in the past, causes the target now".
//! Repeating the template over a window of time slices yields the full
//! micro-level graph (see [`crate::unrolled`]).

use crate::error::GraphError;

/// Index of a time series. Total order; stable within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeriesId(pub u32);

impl SeriesId {
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }
}

/// One lagged edge of a template: `source` at `lag` steps in the past
/// causes `target` in the present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemplateEdge {
    pub source: SeriesId,
    pub lag: u32,
    pub target: SeriesId,
}

impl TemplateEdge {
    pub fn new(source: SeriesId, lag: u32, target: SeriesId) -> Self {
        TemplateEdge {
            source,
            lag,
            target,
        }
    }
}

/// A stationary template over `n_series` time series.
///
/// Invariants enforced at construction:
/// - every series index is in range;
/// - no instantaneous self-edge `(s, 0, s)`;
/// - the lag-0 subgraph is acyclic;
/// - edges are deduplicated and stored sorted;
/// - `gamma_max` equals the largest lag present (0 for lagless templates).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemplateGraph {
    n_series: u32,
    gamma_max: u32,
    edges: Vec<TemplateEdge>,
}

impl TemplateGraph {
    pub fn new(
        n_series: u32,
        edges: impl IntoIterator<Item = TemplateEdge>,
    ) -> Result<Self, GraphError> {
        let mut edges: Vec<TemplateEdge> = edges.into_iter().collect();
        edges.sort_unstable();
        edges.dedup();

        for e in &edges {
            for s in [e.source, e.target] {
                if s.0 >= n_series {
                    return Err(GraphError::SeriesOutOfRange {
                        index: s.0,
                        n_series,
                    });
                }
            }
            if e.lag == 0 && e.source == e.target {
                return Err(GraphError::InstantaneousSelfEdge { series: e.source.0 });
            }
        }
        if !lag0_acyclic(n_series, &edges) {
            return Err(GraphError::Lag0Cycle);
        }
        let gamma_max = edges.iter().map(|e| e.lag).max().unwrap_or(0);
        Ok(TemplateGraph {
            n_series,
            gamma_max,
            edges,
        })
    }

    /// Convenience constructor from `(source, lag, target)` triples.
    pub fn from_triples(
        n_series: u32,
        triples: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Result<Self, GraphError> {
        Self::new(
            n_series,
            triples
                .into_iter()
                .map(|(s, l, t)| TemplateEdge::new(SeriesId(s), l, SeriesId(t))),
        )
    }

    #[inline]
    pub fn n_series(&self) -> u32 {
        self.n_series
    }

    /// Largest lag carried by any edge; 0 when no lagged edge exists.
    #[inline]
    pub fn gamma_max(&self) -> u32 {
        self.gamma_max
    }

    /// Edges in sorted order.
    #[inline]
    pub fn edges(&self) -> &[TemplateEdge] {
        &self.edges
    }

    #[inline]
    pub fn contains(&self, e: &TemplateEdge) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    /// True when some edge (any lag) runs from `source` to `target`.
    pub fn has_series_edge(&self, source: SeriesId, target: SeriesId) -> bool {
        self.edges
            .iter()
            .any(|e| e.source == source && e.target == target)
    }
}

/// Cycle check restricted to the lag-0 edges.
fn lag0_acyclic(n_series: u32, edges: &[TemplateEdge]) -> bool {
    let n = n_series as usize;
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut indeg = vec![0u32; n];
    for e in edges.iter().filter(|e| e.lag == 0) {
        children[e.source.0 as usize].push(e.target.0);
        indeg[e.target.0 as usize] += 1;
    }
    // Kahn's algorithm; acyclic iff every vertex is consumed.
    let mut queue: Vec<u32> = (0..n_series).filter(|&v| indeg[v as usize] == 0).collect();
    let mut seen = 0u32;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &c in &children[v as usize] {
            indeg[c as usize] -= 1;
            if indeg[c as usize] == 0 {
                queue.push(c);
            }
        }
    }
    seen == n_series
}
