use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("distance table has {rows} rows but {points} points")]
    RowCount { rows: usize, points: usize },
    #[error("row {row} of the distance table has {len} entries, expected {expected}")]
    RowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("a metric space needs at least two points, got {0}")]
    TooFewPoints(usize),
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("tolerance must be finite and nonnegative, got {0}")]
    BadTolerance(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("metric axioms violated ({0} violations)")]
    NotAMetric(usize),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("edge {from:?}-{to:?} has invalid weight {weight}")]
    BadWeight { from: String, to: String, weight: f64 },
    #[error("graph is disconnected: {to:?} is unreachable from {from:?}")]
    Disconnected { from: String, to: String },
    #[error("{guard} exceeded: {cardinality} points (limit {limit})")]
    SizeGuard {
        guard: &'static str,
        cardinality: usize,
        limit: usize,
    },
    #[error("subset is empty")]
    EmptySubset,
    #[error("twin relation is not transitive at tolerance: {a:?} ~ {b:?} ~ {c:?}")]
    TwinsNotTransitive { a: String, b: String, c: String },
    #[error("basis admits {count} equidistant witnesses, expected at most one")]
    WitnessNotUnique { count: usize },
}
