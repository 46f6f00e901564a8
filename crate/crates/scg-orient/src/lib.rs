//! Orientability of instantaneous edges in stationary temporal causal
//! models, decided from a summary causal graph.
//!
//! A stationary system of time series is described by a finite
//! [`template::TemplateGraph`] of lagged edges, repeated over a window of
//! slices ([`unrolled`]). Its macro-level summary ([`scg::Scg`]) records,
//! per ordered series pair, whether any lagged or instantaneous effect
//! exists. Constraint-based discovery with an independence oracle plus the
//! summary as background knowledge recovers a maximally oriented graph
//! ([`discovery`]); the only edges it may leave undirected are
//! instantaneous ones.
//!
//! The crate answers, from the summary alone, which instantaneous edges
//! are guaranteed to come out oriented ([`identifiability`]), verifies the
//! answers by exhaustive enumeration of compatible micro-level graphs
//! ([`verify`]), and counts, over all summary graphs of a given size, how
//! many contain an undecidable pair ([`census`](mod@census)).
//!
//! See the `book/` guide for a narrative walk-through; its code snippets
//! compile and run as the doc-tests of [`guide`].

pub mod brute;
pub mod census;
pub mod cli;
pub mod discovery;
pub mod error;
pub mod format;
pub mod guide;
pub mod identifiability;
pub mod pdag;
pub mod scg;
pub mod template;
pub mod unrolled;
pub mod verify;

pub use census::{census, CensusRow};
pub use discovery::{default_window, ftmpdag_of, meek_closure, tpc, tpc_with_rules};
pub use error::{CensusError, DiscoveryError, GraphError, ParseError};
pub use identifiability::{
    cde_identifiable, s_identifiable, total_effect_identifiable, Reason, SIdReport, Verdict,
};
pub use pdag::{dag_to_cpdag, Orientation, Pdag, RuleSet};
pub use scg::{compatible, enumerate_compatible_templates, scg_of, MacroPair, Scg};
pub use template::{SeriesId, TemplateEdge, TemplateGraph};
pub use unrolled::{unroll, UnrolledGraph, Vertex};
pub use verify::{verify_all, verify_theorem, AggregateReport, VerificationReport};
