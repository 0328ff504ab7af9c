use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImageError {
    #[error("image dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("expected {expected} samples, got {actual}")]
    SampleCount { expected: usize, actual: usize },
    #[error("sample {index} has brightness {value}, outside [0, 255]")]
    SampleOutOfRange { index: usize, value: f64 },
    #[error("histogram has no pixels")]
    EmptyHistogram,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PgmError {
    #[error("bad magic number: expected P2 or P5")]
    BadMagic,
    #[error("malformed {field} field at byte offset {offset}")]
    BadField { field: &'static str, offset: usize },
    #[error("unsupported maxval {maxval} at byte offset {offset} (must be 1..=255)")]
    BadMaxval { maxval: u64, offset: usize },
    #[error("zero dimension in header: {width}x{height}")]
    ZeroDimension { width: u64, height: u64 },
    #[error(
        "pixel data truncated at byte offset {offset}: expected {expected} samples, found {found}"
    )]
    Truncated {
        offset: usize,
        expected: usize,
        found: usize,
    },
    #[error("sample {value} at byte offset {offset} exceeds maxval {maxval}")]
    SampleAboveMaxval {
        offset: usize,
        value: u64,
        maxval: u64,
    },
    #[error(transparent)]
    Image(#[from] ImageError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("control points must include tones 0 and 255")]
    MissingEndpoint,
    #[error("control point tones must be strictly increasing (at point {index})")]
    Unsorted { index: usize },
    #[error("control point {index} ({tone}, {value}) lies outside [0, 255]")]
    PointOutOfRange { index: usize, tone: f64, value: f64 },
    #[error("malformed control point list: {0}")]
    Parse(String),
    #[error("tone {tone} maps to {value}, outside [0, 255]")]
    OutOfRange { tone: u8, value: f64 },
    #[error("invalid transform parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Image(#[from] ImageError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionalError {
    #[error("fringe visibility needs i_max >= i_min >= 0 and i_max + i_min > 0, got i_max={i_max}, i_min={i_min}")]
    Domain { i_max: f64, i_min: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("malformed grid axis {axis:?}: {reason}")]
    BadAxis { axis: String, reason: String },
    #[error("no feasible variation: all {candidates} candidates were rejected")]
    NoFeasibleVariation { candidates: usize },
    #[error("invalid worker count {0}")]
    Workers(usize),
}
