//! Summary causal graphs: the macro-level view with one vertex per series.
//!
//! A summary graph is an arbitrary boolean adjacency matrix; self-loops mark
//! within-series lagged effects and mutual edges (both directions present)
//! are the bidirected pairs the identifiability results revolve around.

use crate::error::GraphError;
use crate::template::{SeriesId, TemplateEdge, TemplateGraph};

/// Macro-level directed graph over series. Any of the `2^(n*n)` adjacency
/// matrices is legal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scg {
    n_series: u32,
    adj: Vec<bool>,
}

impl Scg {
    pub fn new(n_series: u32) -> Self {
        Scg {
            n_series,
            adj: vec![false; (n_series * n_series) as usize],
        }
    }

    /// Decode a row-major adjacency bitmask; bit `u*n + v` is the edge
    /// `u -> v`. Limited to `n <= 8` so the mask fits one word.
    pub fn from_mask(n_series: u32, mask: u64) -> Result<Self, GraphError> {
        if n_series > 8 {
            return Err(GraphError::SeriesOutOfRange {
                index: n_series,
                n_series: 8,
            });
        }
        let mut scg = Scg::new(n_series);
        for u in 0..n_series {
            for v in 0..n_series {
                if mask >> (u * n_series + v) & 1 == 1 {
                    scg.add_edge(SeriesId(u), SeriesId(v)).unwrap();
                }
            }
        }
        Ok(scg)
    }

    /// Row-major adjacency bitmask; inverse of [`Scg::from_mask`].
    pub fn mask(&self) -> u64 {
        debug_assert!(self.n_series <= 8);
        let mut m = 0u64;
        for (i, &b) in self.adj.iter().enumerate() {
            if b {
                m |= 1 << i;
            }
        }
        m
    }

    #[inline]
    pub fn n_series(&self) -> u32 {
        self.n_series
    }

    fn check(&self, s: SeriesId) -> Result<(), GraphError> {
        if s.0 >= self.n_series {
            return Err(GraphError::SeriesOutOfRange {
                index: s.0,
                n_series: self.n_series,
            });
        }
        Ok(())
    }

    pub fn add_edge(&mut self, from: SeriesId, to: SeriesId) -> Result<(), GraphError> {
        self.check(from)?;
        self.check(to)?;
        self.adj[(from.0 * self.n_series + to.0) as usize] = true;
        Ok(())
    }

    /// Unchecked edge lookup (indices must be in range).
    #[inline]
    pub fn edge(&self, from: SeriesId, to: SeriesId) -> bool {
        self.adj[(from.0 * self.n_series + to.0) as usize]
    }

    pub fn is_bidirected(&self, x: SeriesId, y: SeriesId) -> Result<bool, GraphError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.edge(x, y) && self.edge(y, x))
    }

    pub fn has_self_loop(&self, x: SeriesId) -> Result<bool, GraphError> {
        self.check(x)?;
        Ok(self.edge(x, x))
    }

    /// Series adjacent to `x` in either direction, excluding `x` itself.
    pub fn neighbors(&self, x: SeriesId) -> Result<Vec<SeriesId>, GraphError> {
        self.check(x)?;
        Ok((0..self.n_series)
            .map(SeriesId)
            .filter(|&z| z != x && (self.edge(x, z) || self.edge(z, x)))
            .collect())
    }

    /// True when some third series forces the orientation of an
    /// instantaneous edge between `x` and `y`: a `z` with an edge into
    /// exactly one of the two.
    ///
    /// Such a `z` always completes a collider at the member it points into
    /// (the mutual edge supplies the second arrowhead) that no compatible
    /// micro-level graph can shield away, or it anchors a directed chain
    /// through `z` that resolves the edge. A `z` pointing into both members
    /// can be shielded on both sides simultaneously and decides nothing.
    /// Symmetric in `x` and `y`. Pinned by exhaustive enumeration of all
    /// compatible micro-level graphs over up to three series.
    pub fn unshielded_collider_exists(&self, x: SeriesId, y: SeriesId) -> Result<bool, GraphError> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Err(GraphError::DegeneratePair);
        }
        Ok((0..self.n_series).map(SeriesId).any(|z| {
            z != x && z != y && (self.edge(z, x) != self.edge(z, y))
        }))
    }
}

/// Unordered pair of distinct series, normalized so `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MacroPair {
    lo: SeriesId,
    hi: SeriesId,
}

impl MacroPair {
    pub fn new(a: SeriesId, b: SeriesId) -> Result<Self, GraphError> {
        if a == b {
            return Err(GraphError::DegeneratePair);
        }
        Ok(if a.0 < b.0 {
            MacroPair { lo: a, hi: b }
        } else {
            MacroPair { lo: b, hi: a }
        })
    }

    #[inline]
    pub fn lo(&self) -> SeriesId {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> SeriesId {
        self.hi
    }
}

/// Summary of a template: edge `u -> v` iff the template has some edge from
/// `u` to `v` at any lag. Presence and absence are both meaningful.
pub fn scg_of(template: &TemplateGraph) -> Scg {
    let mut scg = Scg::new(template.n_series());
    for e in template.edges() {
        scg.add_edge(e.source, e.target).unwrap();
    }
    scg
}

/// Exact compatibility: the template's summary equals `scg`, edge presence
/// and absence alike.
pub fn compatible(scg: &Scg, template: &TemplateGraph) -> Result<bool, GraphError> {
    if scg.n_series() != template.n_series() {
        return Err(GraphError::DimensionMismatch {
            left: scg.n_series(),
            right: template.n_series(),
        });
    }
    Ok(scg_of(template) == *scg)
}

/// Deterministic stream of every template compatible with `scg` whose lags
/// stay within `gamma_max`.
///
/// Each summary edge `(u, v)` owns the lag slots `0..=gamma_max` (`1..=` for
/// self-loops); a template picks a nonempty subset per edge. Streams in
/// lexicographic order of the per-edge subset bitmasks with edges in
/// row-major order, skipping choices whose lag-0 subgraph is cyclic.
pub fn enumerate_compatible_templates(
    scg: &Scg,
    gamma_max: u32,
) -> CompatibleTemplates {
    let mut slots: Vec<Vec<u32>> = Vec::new();
    let mut pairs: Vec<(SeriesId, SeriesId)> = Vec::new();
    for u in 0..scg.n_series() {
        for v in 0..scg.n_series() {
            let (u, v) = (SeriesId(u), SeriesId(v));
            if scg.edge(u, v) {
                let lags: Vec<u32> = (0..=gamma_max).filter(|&l| !(u == v && l == 0)).collect();
                pairs.push((u, v));
                slots.push(lags);
            }
        }
    }
    let exhausted = slots.iter().any(|s| s.is_empty());
    CompatibleTemplates {
        n_series: scg.n_series(),
        pairs,
        slots,
        cursor: None,
        exhausted,
    }
}

/// Upper bound on the number of compatible templates (before the lag-0
/// acyclicity filter), saturating at `u64::MAX`.
pub fn compatible_template_bound(scg: &Scg, gamma_max: u32) -> u64 {
    let mut bound = 1u64;
    for u in 0..scg.n_series() {
        for v in 0..scg.n_series() {
            if scg.edge(SeriesId(u), SeriesId(v)) {
                let slots = if u == v { gamma_max } else { gamma_max + 1 };
                if slots >= 64 {
                    return u64::MAX;
                }
                bound = bound.saturating_mul((1u64 << slots) - 1);
            }
        }
    }
    bound
}

/// Iterator over compatible templates; see [`enumerate_compatible_templates`].
#[derive(Debug, Clone)]
pub struct CompatibleTemplates {
    n_series: u32,
    pairs: Vec<(SeriesId, SeriesId)>,
    slots: Vec<Vec<u32>>,
    /// Per-edge nonempty subset masks; `None` before the first step.
    cursor: Option<Vec<u64>>,
    exhausted: bool,
}

impl CompatibleTemplates {
    /// Advance the odometer; last edge fastest, masks ascending.
    fn step(&mut self) -> bool {
        match &mut self.cursor {
            None => {
                self.cursor = Some(vec![1; self.slots.len()]);
                true
            }
            Some(masks) => {
                for i in (0..masks.len()).rev() {
                    let limit = (1u64 << self.slots[i].len()) - 1;
                    if masks[i] < limit {
                        masks[i] += 1;
                        for m in masks[i + 1..].iter_mut() {
                            *m = 1;
                        }
                        return true;
                    }
                }
                false
            }
        }
    }

    fn build(&self) -> Option<TemplateGraph> {
        let masks = self.cursor.as_ref()?;
        let mut edges = Vec::new();
        for ((&(u, v), lags), &mask) in self.pairs.iter().zip(&self.slots).zip(masks) {
            for (bit, &lag) in lags.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    edges.push(TemplateEdge::new(u, lag, v));
                }
            }
        }
        TemplateGraph::new(self.n_series, edges).ok()
    }
}

impl Iterator for CompatibleTemplates {
    type Item = TemplateGraph;

    fn next(&mut self) -> Option<TemplateGraph> {
        if self.exhausted {
            return None;
        }
        loop {
            if !self.step() {
                self.exhausted = true;
                return None;
            }
            // Construction only fails on a lag-0 cycle here; skip those.
            if let Some(t) = self.build() {
                return Some(t);
            }
        }
    }
}
