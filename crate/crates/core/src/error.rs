use thiserror::Error;

use crate::geometry::Point2;

/// Errors raised by the geometry, field and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid primitive: {0}")]
    InvalidPrimitive(String),
    #[error("empty shape")]
    EmptyShape,
    #[error("chain is not G1 at joint {joint}: tangent jump {jump:.3e} rad")]
    NotG1 { joint: usize, jump: f64 },
    #[error("arc-length parameter {s} outside [0, {len}]")]
    OutOfRange { s: f64, len: f64 },
    #[error("query point lies on the set")]
    OnSet,
    #[error("query point has {0} projections")]
    MultipleProjections(usize),
    #[error("grid of {nodes} nodes exceeds the budget of {budget}")]
    GridTooLarge { nodes: usize, budget: usize },
    #[error("degenerate bounding box or spacing")]
    DegenerateGrid,
    #[error("radius {r} exceeds the reach bound {reach}")]
    ReachExceeded { r: f64, reach: f64 },
    #[error("domain has no interior nodes")]
    EmptyDomain,
    #[error("degenerate offset loop of length {length:.3e}")]
    DegenerateLoop { length: f64 },
    #[error("inward normal cannot be determined near {0:?}")]
    NormalAmbiguous(Point2),
    #[error("inner normal undefined at corner {0:?}")]
    NormalUndefined(Point2),
    #[error("domain is not convex: {0}")]
    NotConvex(String),
    #[error("point {0:?} does not lie on the set")]
    NotOnSet(Point2),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
