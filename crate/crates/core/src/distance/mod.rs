//! Distance and projection queries against shapes and domains, dense grid
//! transforms and the identity / Lipschitz probes.

mod domain;
mod field;
mod probes;
mod sampler;

pub use crate::geometry::ProjectionResult;
pub use domain::{Domain, Regularity};
pub use field::{grid_transform, grid_transform_with, DistanceField, DistanceSource, DEFAULT_NODE_BUDGET};
pub use probes::{
    check_complement_identity, gradient_fd_check, projection_lipschitz_probe, GradientCheck, IdentityReport,
    LipschitzReport,
};
pub use sampler::LowDiscrepancy;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Shape, UnitVec};

/// Distance from `x` to `shape` with the full nearest-point set.
pub fn eval_distance(shape: &Shape, x: Point2) -> ProjectionResult {
    shape.project(x)
}

/// Gradient of the distance function, `(x − π(x)) / d(x)`.
pub fn gradient(shape: &Shape, x: Point2) -> Result<UnitVec> {
    let r = shape.project(x);
    if r.distance <= shape.dup_radius() * 1e-3 {
        return Err(Error::OnSet);
    }
    if !r.is_unique() {
        return Err(Error::MultipleProjections(r.multiplicity));
    }
    UnitVec::new(x - r.projections[0]).ok_or(Error::OnSet)
}

#[cfg(test)]
mod tests;
