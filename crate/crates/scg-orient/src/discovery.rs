//! Oracle constraint-based discovery with summary-graph background
//! knowledge.
//!
//! Two routes produce the same maximally oriented graph:
//!
//! - [`tpc`] runs the discovery pipeline proper: complete graph, lag and
//!   background orientation, oracle skeleton pruning with recorded
//!   separating sets, collider orientation, rule closure, and the final
//!   summary-witness rule.
//! - [`ftmpdag_of`] starts from the equivalence-class representative
//!   ([`crate::pdag::dag_to_cpdag`]) and adds the same background closure.
//!
//! Their agreement on interior slices is a cross-check, not an
//! implementation shortcut; the test suites exercise it exhaustively on
//! small universes.

use std::collections::HashMap;

use crate::error::DiscoveryError;
use crate::pdag::{close_orientations, dag_to_cpdag, Pdag, RuleSet};
use crate::scg::{compatible, scg_of, Scg};
use crate::template::{SeriesId, TemplateGraph};
use crate::unrolled::{unroll, DsepScratch, UnrolledGraph};

/// Default window for a given maximal lag: two stationary periods plus the
/// present slice. Boundary slices break local stationarity, so correctness
/// claims are made at slices `>= gamma` only; re-running with a longer
/// window (the stability check) guards the choice.
pub fn default_window(gamma_max: u32) -> u32 {
    2 * (gamma_max + 1) + 1
}

/// Fixpoint of the four orientation rules plus stationarity propagation.
///
/// Never removes or reverses an edge; idempotent. Fails when the input
/// encodes contradictory knowledge (an orientation forced both ways or a
/// directed cycle).
pub fn meek_closure(p: &Pdag, rules: RuleSet) -> Result<Pdag, DiscoveryError> {
    let mut out = p.clone();
    let gamma = p.max_lag();
    close_orientations(&mut out, rules, true, gamma)?;
    Ok(out)
}

/// Maximally oriented graph for `template` under the background knowledge
/// in `scg`, built from the equivalence-class representative.
pub fn ftmpdag_of(
    template: &TemplateGraph,
    scg: &Scg,
    window_len: u32,
) -> Result<Pdag, DiscoveryError> {
    if !compatible(scg, template).map_err(DiscoveryError::Graph)? {
        return Err(DiscoveryError::IncompatibleScg);
    }
    let truth = unroll(template, window_len).map_err(DiscoveryError::Graph)?;
    let mut p = dag_to_cpdag(&truth);
    apply_background(&mut p, &truth, scg, RuleSet::All)?;
    Ok(p)
}

/// Oracle discovery pipeline. `scg` must be exactly the summary of the
/// ground truth; an incorrect prior is rejected rather than silently
/// producing wrong orientations.
pub fn tpc(truth: &UnrolledGraph, scg: &Scg) -> Result<Pdag, DiscoveryError> {
    tpc_with_rules(truth, scg, RuleSet::All)
}

/// [`tpc`] with a configurable rule set for the closure phase.
pub fn tpc_with_rules(
    truth: &UnrolledGraph,
    scg: &Scg,
    rules: RuleSet,
) -> Result<Pdag, DiscoveryError> {
    if scg_of(truth.template()) != *scg {
        return Err(DiscoveryError::IncompatibleScg);
    }
    let n = truth.n_series();
    let window = truth.window_len();

    // 1. Fully connected unoriented graph.
    let mut p = Pdag::complete(n, window);

    // 2. Lag orientation and background orientation of instantaneous pairs.
    orient_lags_and_background(&mut p, scg)?;

    // 3. Skeleton pruning by oracle independence, recording separating sets.
    let sepsets = prune_skeleton(&mut p, truth);

    // 4. Unshielded-collider orientation by the separating-set criterion.
    orient_colliders(&mut p, &sepsets)?;

    // 5 and 6. Rule closure and the summary-witness rule, to fixpoint.
    background_fixpoint(&mut p, scg, truth.template().gamma_max(), rules)?;
    Ok(p)
}

/// Direct every lagged pair past -> present; direct instantaneous pairs
/// whose summary edge runs one way only.
fn orient_lags_and_background(p: &mut Pdag, scg: &Scg) -> Result<(), DiscoveryError> {
    for (u, v) in p.undirected_edges() {
        let (ui, vi) = (p.vertex_id(u), p.vertex_id(v));
        if u.slice < v.slice {
            p.direct(ui, vi)?;
        } else if u.slice == v.slice {
            let forward = scg.edge(u.series, v.series);
            let backward = scg.edge(v.series, u.series);
            if forward && !backward {
                p.direct(ui, vi)?;
            } else if backward && !forward {
                p.direct(vi, ui)?;
            }
        }
    }
    Ok(())
}

/// Remove every edge with an oracle-separable pair, searching subsets of the
/// smaller endpoint's current adjacency first, by increasing size,
/// lexicographic within a size. Conditioning candidates never sit in the
/// future of the later endpoint. Returns the recorded separating sets keyed by
/// canonical pair.
fn prune_skeleton(p: &mut Pdag, truth: &UnrolledGraph) -> HashMap<(u32, u32), Vec<u32>> {
    let mut sepsets: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    let mut scratch = DsepScratch::new(truth.n_vertices());
    let n = truth.n_series();
    let mut level = 0usize;
    loop {
        let mut any_candidates = false;
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for u in 0..p.n_vertices() {
            for v in (u + 1)..p.n_vertices() {
                if p.is_adjacent(u, v) {
                    pairs.push((u, v));
                }
            }
        }
        for (a, b) in pairs {
            if !p.is_adjacent(a, b) {
                continue;
            }
            let later_slice = (b / n).max(a / n);
            let mut removed = false;
            for anchor in [a, b] {
                let candidates: Vec<u32> = p
                    .neighbor_ids(anchor)
                    .into_iter()
                    .filter(|&w| w != a && w != b && w / n <= later_slice)
                    .collect();
                if candidates.len() >= level {
                    any_candidates = true;
                } else {
                    continue;
                }
                if let Some(set) =
                    find_separator(truth, &mut scratch, a, b, &candidates, level)
                {
                    p.remove_edge(a, b);
                    sepsets.insert((a, b), set);
                    removed = true;
                    break;
                }
            }
            if removed {
                continue;
            }
        }
        if !any_candidates {
            break;
        }
        level += 1;
    }
    sepsets
}

/// First separating subset of `candidates` with exactly `size` elements, in
/// lexicographic order, if any.
fn find_separator(
    truth: &UnrolledGraph,
    scratch: &mut DsepScratch,
    a: u32,
    b: u32,
    candidates: &[u32],
    size: usize,
) -> Option<Vec<u32>> {
    let mut subset: Vec<usize> = (0..size).collect();
    let mut buffer: Vec<u32> = Vec::with_capacity(size);
    if size > candidates.len() {
        return None;
    }
    loop {
        buffer.clear();
        buffer.extend(subset.iter().map(|&i| candidates[i]));
        if truth.d_separated_ids(scratch, a, b, &buffer) {
            return Some(buffer);
        }
        // Next k-combination in lexicographic order.
        let mut i = size;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if subset[i] != i + candidates.len() - size {
                subset[i] += 1;
                for j in i + 1..size {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Orient `w *-> m <- v` for every unshielded triple whose midpoint is
/// outside the recorded separating set of its endpoints.
fn orient_colliders(
    p: &mut Pdag,
    sepsets: &HashMap<(u32, u32), Vec<u32>>,
) -> Result<(), DiscoveryError> {
    for (a, b) in p.undirected_edge_ids() {
        for (mid, far) in [(a, b), (b, a)] {
            if !p.is_undirected(a, b) {
                break;
            }
            for w in p.neighbor_ids(mid) {
                if w == far || p.is_adjacent(w, far) || p.is_directed(mid, w) {
                    continue;
                }
                let key = if w < far { (w, far) } else { (far, w) };
                let Some(set) = sepsets.get(&key) else {
                    continue;
                };
                if !set.contains(&mid) {
                    if p.is_undirected(w, mid) {
                        p.direct(w, mid)?;
                    }
                    p.direct(far, mid)?;
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Shared tail of both discovery routes: rule closure interleaved with the
/// summary-witness rule until neither changes the graph.
fn background_fixpoint(
    p: &mut Pdag,
    scg: &Scg,
    gamma: u32,
    rules: RuleSet,
) -> Result<(), DiscoveryError> {
    loop {
        close_orientations(p, rules, true, gamma)?;
        if !apply_summary_witness_rule(p, scg, gamma)? {
            return Ok(());
        }
    }
}

/// Apply lag orientation, background orientation, rule closure and the
/// summary-witness rule to an equivalence-class representative.
fn apply_background(
    p: &mut Pdag,
    truth: &UnrolledGraph,
    scg: &Scg,
    rules: RuleSet,
) -> Result<(), DiscoveryError> {
    orient_lags_and_background(p, scg)?;
    background_fixpoint(p, scg, truth.template().gamma_max(), rules)
}

/// The final background rule: a summary edge must be witnessed by some
/// micro-level edge. If `X_k - Y_k` is still undirected at an interior
/// slice, the summary has `X -> Y`, and no directed edge from any X-vertex
/// into `Y_k` exists, the instantaneous edge is the only possible witness
/// and is oriented `X_k -> Y_k`. Boundary slices are skipped: their
/// truncated parent sets would make the "no other witness" test unsound.
fn apply_summary_witness_rule(
    p: &mut Pdag,
    scg: &Scg,
    gamma: u32,
) -> Result<bool, DiscoveryError> {
    let n = p.n_series();
    let mut changed = false;
    for (a, b) in p.undirected_edge_ids() {
        if !p.is_undirected(a, b) {
            continue;
        }
        let (va, vb) = (p.vertex_of(a), p.vertex_of(b));
        if va.slice != vb.slice || va.slice < gamma {
            continue;
        }
        for (from, to, fi, ti) in [
            (va.series, vb.series, a, b),
            (vb.series, va.series, b, a),
        ] {
            if !scg.edge(from, to) {
                continue;
            }
            let witnessed = (0..p.window_len()).any(|k| {
                let w = k * n + from.0;
                w != fi && p.is_directed(w, ti)
            });
            if !witnessed {
                p.direct(fi, ti)?;
                changed = true;
                break;
            }
        }
    }
    Ok(changed)
}

/// Convenience wrapper: summary + discovery for a template, using [`tpc`].
pub fn discover(
    template: &TemplateGraph,
    scg: Option<&Scg>,
    window_len: u32,
    rules: RuleSet,
) -> Result<Pdag, DiscoveryError> {
    let derived;
    let scg = match scg {
        Some(s) => {
            if !compatible(s, template).map_err(DiscoveryError::Graph)? {
                return Err(DiscoveryError::IncompatibleScg);
            }
            s
        }
        None => {
            derived = scg_of(template);
            &derived
        }
    };
    let truth = unroll(template, window_len).map_err(DiscoveryError::Graph)?;
    tpc_with_rules(&truth, scg, rules)
}

/// Interior slices of a window: far enough from the left boundary that the
/// local structure matches the stationary template.
pub fn interior_slices(gamma_max: u32, window_len: u32) -> impl Iterator<Item = u32> {
    gamma_max..window_len
}

/// True when the instantaneous pair `(x, y)` is undirected at any interior
/// slice of `p`.
pub fn undirected_at_interior(p: &Pdag, gamma: u32, x: SeriesId, y: SeriesId) -> bool {
    let n = p.n_series();
    interior_slices(gamma, p.window_len()).any(|k| {
        let a = k * n + x.0;
        let b = k * n + y.0;
        p.is_undirected(a, b)
    })
}
