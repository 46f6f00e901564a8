//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while constructing or querying graphs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("series index {index} out of range for {n_series} series")]
    SeriesOutOfRange { index: u32, n_series: u32 },
    #[error("vertex ({series}, {slice}) out of range for {n_series} series and window {window_len}")]
    VertexOutOfRange {
        series: u32,
        slice: u32,
        n_series: u32,
        window_len: u32,
    },
    #[error("instantaneous self-edge on series {series} is not allowed")]
    InstantaneousSelfEdge { series: u32 },
    #[error("lag-0 subgraph contains a directed cycle")]
    Lag0Cycle,
    #[error("window of {window_len} slices is too small; at least {required} required")]
    WindowTooSmall { window_len: u32, required: u32 },
    #[error("query arguments overlap: the endpoints must be distinct and not conditioned on")]
    OverlappingArguments,
    #[error("dimension mismatch: graph has {left} series, argument has {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("pair endpoints must be distinct")]
    DegeneratePair,
}

/// Errors raised by the discovery pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscoveryError {
    #[error("summary graph is not the summary of the supplied ground truth")]
    IncompatibleScg,
    #[error("contradictory background knowledge: {detail}")]
    Inconsistent { detail: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by the census and verification drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("census over {n} series needs {bits} adjacency bits; sizes above {limit} require an explicit override")]
    TooLarge { n: u32, bits: u32, limit: u32 },
    #[error("series count must be at least 2, got {n}")]
    TooSmall { n: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Discovery(#[from] DiscoveryError),
}

/// Errors raised while parsing the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}
