//! Per-pair orientability verdicts and the effect-identifiability criteria
//! derived from them.

use serde::Serialize;

use crate::error::GraphError;
use crate::scg::{MacroPair, Scg};
use crate::template::SeriesId;

/// Whether the orientation of the instantaneous edge between a pair is
/// guaranteed for every micro-level graph compatible with the summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    SId,
    NotSId,
}

/// The weakest sufficient condition justifying a verdict, checked in
/// priority order (cheapest first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reason {
    /// No summary edge at all: the micro edge is absent, never undirected.
    NoAdjacency,
    /// A one-directional summary edge fixes the orientation outright.
    DirectedEdge,
    /// Mutual summary edges but at most one self-loop: the chain rule or a
    /// collider always resolves the edge.
    NoDoubleSelfLoop,
    /// A third series points into exactly one member of the pair.
    UnshieldedCollider,
    /// Mutual edges, both self-loops, and no deciding third series: some
    /// compatible micro-level graph leaves the edge undirected.
    TheoremBlocked,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::NoAdjacency => "NoAdjacency",
            Reason::DirectedEdge => "DirectedEdge",
            Reason::NoDoubleSelfLoop => "NoDoubleSelfLoop",
            Reason::UnshieldedCollider => "UnshieldedCollider",
            Reason::TheoremBlocked => "TheoremBlocked",
        }
    }
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::SId => "SId",
            Verdict::NotSId => "NotSId",
        }
    }
}

/// Verdict for one unordered pair together with its justification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SIdReport {
    pub pair: MacroPair,
    pub verdict: Verdict,
    pub reason: Reason,
}

/// Decide orientability of the instantaneous edge between `x` and `y` from
/// the summary alone. The verdict is `NotSId` exactly when the pair is
/// mutual, both members carry self-loops, and no third series points into
/// exactly one of them.
pub fn s_identifiable(scg: &Scg, x: SeriesId, y: SeriesId) -> Result<SIdReport, GraphError> {
    let pair = MacroPair::new(x, y)?;
    let forward = {
        scg.is_bidirected(x, y)?; // range check once
        scg.edge(x, y)
    };
    let backward = scg.edge(y, x);
    let reason = if !forward && !backward {
        Reason::NoAdjacency
    } else if forward != backward {
        Reason::DirectedEdge
    } else if !(scg.has_self_loop(x)? && scg.has_self_loop(y)?) {
        Reason::NoDoubleSelfLoop
    } else if scg.unshielded_collider_exists(x, y)? {
        Reason::UnshieldedCollider
    } else {
        Reason::TheoremBlocked
    };
    let verdict = if reason == Reason::TheoremBlocked {
        Verdict::NotSId
    } else {
        Verdict::SId
    };
    Ok(SIdReport {
        pair,
        verdict,
        reason,
    })
}

/// Outcome of an effect-identifiability check; `blocking` lists the
/// neighbor pairs that fail the per-pair criterion. A `false` result means
/// "not guaranteed by this criterion", not "non-identifiable".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffectReport {
    pub target: SeriesId,
    pub identifiable: bool,
    pub blocking: Vec<MacroPair>,
}

/// Sufficient condition for total-effect identifiability: every pair
/// joining the treatment to one of its neighbors must be orientable.
pub fn total_effect_identifiable(
    scg: &Scg,
    treatment: SeriesId,
) -> Result<EffectReport, GraphError> {
    effect_over_neighbors(scg, treatment)
}

/// Sufficient condition for controlled-direct-effect identifiability: every
/// pair joining the outcome to one of its neighbors must be orientable.
pub fn cde_identifiable(scg: &Scg, outcome: SeriesId) -> Result<EffectReport, GraphError> {
    effect_over_neighbors(scg, outcome)
}

fn effect_over_neighbors(scg: &Scg, target: SeriesId) -> Result<EffectReport, GraphError> {
    let mut blocking = Vec::new();
    for z in scg.neighbors(target)? {
        let report = s_identifiable(scg, z, target)?;
        if report.verdict == Verdict::NotSId {
            blocking.push(report.pair);
        }
    }
    Ok(EffectReport {
        target,
        identifiable: blocking.is_empty(),
        blocking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: u32) -> SeriesId {
        SeriesId(i)
    }

    fn scg_from(n: u32, edges: &[(u32, u32)]) -> Scg {
        let mut scg = Scg::new(n);
        for &(u, v) in edges {
            scg.add_edge(s(u), s(v)).unwrap();
        }
        scg
    }

    /// A <-> B, C <-> D, B -> C, self-loops everywhere.
    fn two_block_chain() -> Scg {
        scg_from(
            4,
            &[
                (0, 1),
                (1, 0),
                (2, 3),
                (3, 2),
                (1, 2),
                (0, 0),
                (1, 1),
                (2, 2),
                (3, 3),
            ],
        )
    }

    #[test]
    fn blocked_pair_and_collider_rescue() {
        let scg = two_block_chain();
        let ab = s_identifiable(&scg, s(0), s(1)).unwrap();
        assert_eq!(ab.verdict, Verdict::NotSId);
        assert_eq!(ab.reason, Reason::TheoremBlocked);
        let cd = s_identifiable(&scg, s(2), s(3)).unwrap();
        assert_eq!(cd.verdict, Verdict::SId);
        assert_eq!(cd.reason, Reason::UnshieldedCollider);
        let bc = s_identifiable(&scg, s(1), s(2)).unwrap();
        assert_eq!(bc.reason, Reason::DirectedEdge);
        let ad = s_identifiable(&scg, s(0), s(3)).unwrap();
        assert_eq!(ad.reason, Reason::NoAdjacency);
    }

    #[test]
    fn mutual_pair_without_loops_is_safe() {
        let scg = scg_from(2, &[(0, 1), (1, 0)]);
        let r = s_identifiable(&scg, s(0), s(1)).unwrap();
        assert_eq!(r.verdict, Verdict::SId);
        assert_eq!(r.reason, Reason::NoDoubleSelfLoop);
    }

    #[test]
    fn verdict_is_symmetric() {
        for mask in 0..512u64 {
            let scg = Scg::from_mask(3, mask).unwrap();
            for x in 0..3 {
                for y in (x + 1)..3 {
                    let a = s_identifiable(&scg, s(x), s(y)).unwrap();
                    let b = s_identifiable(&scg, s(y), s(x)).unwrap();
                    assert_eq!(a.verdict, b.verdict, "mask {mask} pair ({x},{y})");
                    assert_eq!(a.reason, b.reason, "mask {mask} pair ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn fresh_pointing_series_rescues_every_blocked_pair() {
        // Adding a node with a single edge into one pair member flips the
        // verdict to identifiable.
        for mask in 0..512u64 {
            let scg = Scg::from_mask(3, mask).unwrap();
            for x in 0..3u32 {
                for y in (x + 1)..3 {
                    let before = s_identifiable(&scg, s(x), s(y)).unwrap();
                    if before.verdict != Verdict::NotSId {
                        continue;
                    }
                    let mut bigger = Scg::new(4);
                    for u in 0..3 {
                        for v in 0..3 {
                            if scg.edge(s(u), s(v)) {
                                bigger.add_edge(s(u), s(v)).unwrap();
                            }
                        }
                    }
                    bigger.add_edge(s(3), s(y)).unwrap();
                    let after = s_identifiable(&bigger, s(x), s(y)).unwrap();
                    assert_eq!(after.verdict, Verdict::SId);
                    assert_eq!(after.reason, Reason::UnshieldedCollider);
                }
            }
        }
    }

    #[test]
    fn total_effect_composition() {
        let scg = two_block_chain();
        // Treatment C: neighbors B and D, both pairs orientable.
        let c = total_effect_identifiable(&scg, s(2)).unwrap();
        assert!(c.identifiable);
        assert!(c.blocking.is_empty());
        // Treatment A: the pair (A, B) blocks.
        let a = total_effect_identifiable(&scg, s(0)).unwrap();
        assert!(!a.identifiable);
        assert_eq!(a.blocking, vec![MacroPair::new(s(0), s(1)).unwrap()]);
        // Isolated node: vacuously identifiable.
        let lonely = scg_from(3, &[(0, 1)]);
        assert!(total_effect_identifiable(&lonely, s(2)).unwrap().identifiable);
    }

    #[test]
    fn cde_composition() {
        let scg = two_block_chain();
        let d = cde_identifiable(&scg, s(3)).unwrap();
        assert!(d.identifiable);
        // Mutual pair with both loops and no third series: outcome blocked.
        let small = scg_from(2, &[(0, 1), (1, 0), (0, 0), (1, 1)]);
        let y = cde_identifiable(&small, s(1)).unwrap();
        assert!(!y.identifiable);
        assert_eq!(y.blocking, vec![MacroPair::new(s(0), s(1)).unwrap()]);
        // No neighbors at all.
        assert!(cde_identifiable(&Scg::new(2), s(0)).unwrap().identifiable);
    }
}
