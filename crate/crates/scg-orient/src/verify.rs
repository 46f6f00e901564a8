//! Brute-force verification of the per-pair verdicts: run discovery over
//! every compatible template and compare with what the summary promised.
//!
//! This is the ground truth that pins the deciding predicate: a pair is
//! truly blocked iff some compatible template's maximally oriented graph
//! leaves the instantaneous edge undirected at an interior slice.

use rayon::prelude::*;
use serde::Serialize;

use crate::discovery::{ftmpdag_of, undirected_at_interior};
use crate::error::CensusError;
use crate::identifiability::{s_identifiable, SIdReport, Verdict};
use crate::scg::{
    compatible_template_bound, enumerate_compatible_templates, MacroPair, Scg,
};
use crate::template::{SeriesId, TemplateGraph};

/// Default cap on templates examined per summary graph.
pub const DEFAULT_VERIFY_BUDGET: u64 = 1_000_000;

/// Largest series count `verify_all` accepts without an explicit override.
pub const DEFAULT_MAX_VERIFY_N: u32 = 3;

/// Brute-force outcome for one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Observed {
    OrientedInAll,
    UnorientedInSome {
        /// A compatible template whose discovery output leaves the pair's
        /// instantaneous edge undirected at an interior slice.
        #[serde(skip)]
        witness: TemplateGraph,
    },
}

/// Expected verdict, brute-force outcome, and whether they agree.
#[derive(Debug, Clone)]
pub struct PairVerification {
    pub pair: MacroPair,
    pub expected: SIdReport,
    pub observed: Observed,
    pub agreement: bool,
}

/// Verification record for one summary graph. `complete` is false when the
/// template budget was exhausted before the stream ended.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub scg: Scg,
    pub pairs: Vec<PairVerification>,
    pub templates_checked: u64,
    pub complete: bool,
}

impl VerificationReport {
    pub fn disagreements(&self) -> usize {
        self.pairs.iter().filter(|p| !p.agreement).count()
    }

    pub fn has_blocked_pair(&self) -> bool {
        self.pairs
            .iter()
            .any(|p| p.expected.verdict == Verdict::NotSId)
    }
}

/// Compare the promised verdict of every pair against discovery over all
/// compatible templates with lags up to `gamma_max`.
pub fn verify_theorem(
    scg: &Scg,
    gamma_max: u32,
    window_len: u32,
    budget: u64,
) -> Result<VerificationReport, CensusError> {
    let n = scg.n_series();
    let mut pairs: Vec<(MacroPair, SIdReport, Option<TemplateGraph>)> = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            let (x, y) = (SeriesId(x), SeriesId(y));
            let pair = MacroPair::new(x, y)?;
            let expected = s_identifiable(scg, x, y)?;
            pairs.push((pair, expected, None));
        }
    }
    let over_budget = compatible_template_bound(scg, gamma_max) > budget;
    let mut checked = 0u64;
    let mut complete = true;
    for template in enumerate_compatible_templates(scg, gamma_max) {
        if checked >= budget {
            complete = !over_budget;
            break;
        }
        checked += 1;
        let mpdag = ftmpdag_of(&template, scg, window_len)?;
        let mut all_witnessed = true;
        for (pair, _, witness) in pairs.iter_mut() {
            if witness.is_none()
                && undirected_at_interior(&mpdag, gamma_max, pair.lo(), pair.hi())
            {
                *witness = Some(template.clone());
            }
            all_witnessed &= witness.is_some();
        }
        if all_witnessed {
            break; // nothing left to learn from further templates
        }
    }
    let pairs = pairs
        .into_iter()
        .map(|(pair, expected, witness)| {
            let observed = match witness {
                Some(w) => Observed::UnorientedInSome { witness: w },
                None => Observed::OrientedInAll,
            };
            let oriented_in_all = matches!(observed, Observed::OrientedInAll);
            let agreement = (expected.verdict == Verdict::SId) == oriented_in_all;
            PairVerification {
                pair,
                expected,
                observed,
                agreement,
            }
        })
        .collect();
    Ok(VerificationReport {
        scg: scg.clone(),
        pairs,
        templates_checked: checked,
        complete,
    })
}

/// Aggregate of [`verify_theorem`] over every summary graph of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AggregateReport {
    pub n: u32,
    pub scgs_checked: u64,
    pub disagreements: u64,
    pub not_fully_sid: u64,
    pub incomplete: u64,
}

/// Run the brute-force verification over all `2^(n*n)` summary graphs.
/// Deterministic for any worker count.
pub fn verify_all(
    n: u32,
    gamma_max: u32,
    window_len: u32,
    budget: u64,
    workers: usize,
    allow_large: bool,
) -> Result<AggregateReport, CensusError> {
    if n < 2 {
        return Err(CensusError::TooSmall { n });
    }
    let limit = if allow_large { 8 } else { DEFAULT_MAX_VERIFY_N };
    if n > limit {
        return Err(CensusError::TooLarge {
            n,
            bits: n * n,
            limit,
        });
    }
    let total = 1u64 << (n * n);
    let workers = workers.max(1);
    let run = |mask: u64| -> Result<(u64, u64, u64), CensusError> {
        let scg = Scg::from_mask(n, mask)?;
        let report = verify_theorem(&scg, gamma_max, window_len, budget)?;
        Ok((
            report.disagreements() as u64,
            report.has_blocked_pair() as u64,
            (!report.complete) as u64,
        ))
    };
    let merged: Result<Vec<(u64, u64, u64)>, CensusError> = if workers == 1 {
        (0..total).map(run).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool");
        pool.install(|| (0..total).into_par_iter().map(run).collect())
    };
    let merged = merged?;
    let mut agg = AggregateReport {
        n,
        scgs_checked: total,
        disagreements: 0,
        not_fully_sid: 0,
        incomplete: 0,
    };
    for (d, b, i) in merged {
        agg.disagreements += d;
        agg.not_fully_sid += b;
        agg.incomplete += i;
    }
    Ok(agg)
}
