use thiserror::Error;

/// Errors produced by the solver and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, {cols} cols")]
    NonSquare { rows: usize, cols: usize },

    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error(
        "self-orthogonal: at or near exceptional point (|(v|v)|/<v|v> = {ratio:.3e} < {threshold:.1e})"
    )]
    SelfOrthogonal { ratio: f64, threshold: f64 },

    #[error("eigensolver failed to converge: {converged} of {total} eigenvalues isolated")]
    Convergence { converged: usize, total: usize },

    #[error("matrix is numerically singular at pivot {pivot}")]
    Singular { pivot: usize },

    #[error("targeted eigensolve converged {converged} of {wanted} requested pairs (krylov {krylov})")]
    TargetedConvergence {
        wanted: usize,
        converged: usize,
        krylov: usize,
    },

    #[error("invalid geometry: {reason}")]
    InvalidGeometry { reason: String },

    #[error("invalid basis: {reason}")]
    InvalidBasis { reason: String },

    #[error("interval [{x1}, {x2}] outside basis box [{lo}, {hi}]")]
    IntervalOutsideBox { x1: f64, x2: f64, lo: f64, hi: f64 },

    #[error("no guided modes found ({hint}); nearest candidates (n_eff): {candidates:?}")]
    NoGuidedModes { hint: String, candidates: Vec<f64> },

    #[error("expected exactly 2 guided modes, found {found}")]
    ModeCount { found: usize },

    #[error("sweep values must be strictly increasing (violated at index {index})")]
    NonIncreasingSweep { index: usize },

    #[error("bracket invalid: {reason}; sampled predicate values: {samples:?}")]
    BadBracket {
        reason: String,
        samples: Vec<(f64, bool)>,
    },

    #[error("insufficient points for fit: have {have}, need {need}")]
    InsufficientPoints { have: usize, need: usize },

    #[error("singular least-squares fit: {reason}")]
    SingularFit { reason: String },

    #[error("degenerate unperturbed level: gap {gap:.3e} at index {index} below 1e-10")]
    Degenerate { index: usize, gap: f64 },

    #[error("matrix is not PT-structured: {reason}")]
    NotPtStructured { reason: String },

    #[error("too few nonzero even-order coefficients: have {have}, need {need}")]
    TooFewCoefficients { have: usize, need: usize },

    #[error("max_order {requested} exceeds the supported limit {limit}")]
    MaxOrderExceeded { requested: usize, limit: usize },

    #[error("empty grid: {which}")]
    EmptyGrid { which: &'static str },

    #[error("sweep point delta_alpha = {delta_alpha}: {source}")]
    SweepPoint {
        delta_alpha: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
