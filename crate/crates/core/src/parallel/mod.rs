//! Tubular neighborhoods: offset boundaries, the parallel parametrization
//! `η = γ + rν`, the `μ = 1 − rκ` profile, tube areas and the tube lemma.

mod contour;
mod lemma;
mod offset;
mod tube;

pub use contour::{contour_loops, snapped_box, ScalarGrid};
pub use lemma::{tube_domain, tube_lemma_check, TubeLemmaReport};
pub use offset::{offset_boundary, offset_boundary_with, OffsetBoundary, OffsetMethod};
pub use tube::{mu_profile, quadratic_fit, recover_core, tube_area, ParallelParam, TubeArea};

#[cfg(test)]
mod tests;
