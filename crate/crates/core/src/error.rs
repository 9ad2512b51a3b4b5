use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad class of a failure, used by the command line front end to pick an
/// exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Unreadable file or malformed JSON.
    Input,
    /// The polygon is not a valid fundamental polygon.
    Validation,
    /// A numeric guarantee failed somewhere in the pipeline.
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({re}, {im}) is not strictly inside the unit disk")]
    InvalidPoint { re: f64, im: f64 },
    #[error("isometry cannot be renormalized: |a|^2 - |b|^2 = {det}")]
    Renormalization { det: f64 },
    #[error("isometry is not hyperbolic (|Re a| = {re_a}), it has no axis")]
    EllipticOrParabolic { re_a: f64 },
    #[error("geodesics do not cross")]
    Disjoint,
    #[error("geodesics are identical")]
    Identical,
    #[error("points are on a common geodesic")]
    Collinear,
    #[error("circumscribed curve is not a circle inside the disk")]
    CenterAtInfinity,
    #[error("sides {0} and {1} of the polygon cross")]
    SelfIntersecting(usize, usize),
    #[error("polygon is not counterclockwise")]
    NotCounterclockwise,
    #[error("polygon has repeated consecutive vertex {0}")]
    RepeatedVertex(usize),

    #[error("pairing is not a fixed-point-free involution: {0}")]
    NotMatching(String),
    #[error("paired sides {side} and {partner} differ in length by {delta:e}")]
    LengthMismatch { side: usize, partner: usize, delta: f64 },
    #[error("polygon does not close up: {0}")]
    OpenPolygon(String),
    #[error("generator for sides ({side}, {partner}) does not map side {partner} onto side {side} (error {error:e})")]
    GeneratorMismatch { side: usize, partner: usize, error: f64 },
    #[error("polygon with {sides} sides is degenerate: {reason}")]
    Degenerate { sides: usize, reason: String },
    #[error("Euler data n = {n}, m = {m} does not describe a closed surface of genus >= 2")]
    EulerMismatch { n: usize, m: usize },
    #[error("vertex star around edge {edge} does not close after {steps} steps")]
    NonClosingStar { edge: usize, steps: usize },

    #[error("no lift of edge {edge} found around polygon vertex {vertex}")]
    LiftNotFound { edge: usize, vertex: usize },
    #[error("words disagree: {0}")]
    WordMismatch(String),

    #[error("no loop crosses loop {0}")]
    NoCrossingLoop(usize),
    #[error("basepoint moved by {c_len} >= 2 * L0 = {bound}")]
    BasepointBound { c_len: f64, bound: f64 },
    #[error("polygon is not convex at vertex {vertex} (angle {angle})")]
    NotConvex { vertex: usize, angle: f64 },

    #[error("edge {0} bounds a degenerate quadrilateral")]
    DegenerateQuad(usize),
    #[error("flip count exceeded the cap of {0}; try a larger predicate tolerance")]
    IterationLimit(usize),

    #[error("only {sides} sides survive merging, fewer than {min}")]
    DegenerateCell { sides: usize, min: usize },
    #[error("tiling walk did not reach the fundamental polygon after {0} steps")]
    TilingWalk(usize),

    #[error("bisection bracket does not straddle the target angle")]
    BisectionFailure,

    #[error("{0} sample comparisons found a translate of the center closer than the center")]
    VerificationFailed(usize),
    #[error("polygon failed validation")]
    ValidationFailed(Box<crate::map::ValidationReport>),
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            Schema(_) | Io(_) | InvalidPoint { .. } => ErrorKind::Input,
            NotMatching(_)
            | LengthMismatch { .. }
            | OpenPolygon(_)
            | GeneratorMismatch { .. }
            | Degenerate { .. }
            | EulerMismatch { .. }
            | NotCounterclockwise
            | RepeatedVertex(_)
            | SelfIntersecting(..)
            | ValidationFailed(_) => ErrorKind::Validation,
            _ => ErrorKind::Numeric,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Schema(err.to_string())
    }
}
