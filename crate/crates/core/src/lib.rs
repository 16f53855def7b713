//! Distance functions, reach, singular sets and tubular neighborhoods of
//! closed planar sets, with numerical checks of their characterization.

pub mod contact;
pub mod distance;
pub mod error;
pub mod gallery;
pub mod geometry;
pub mod normal;
pub mod parallel;
pub mod reach;
pub mod report;
pub mod scene;
pub mod singular;
pub mod svg;
pub mod cli;

pub use error::{Error, Result};
pub use geometry::{ArcCurve, Point2, Primitive, ProjectionResult, Shape, UnitVec};
