use serde::Serialize;

use super::{offset_boundary, OffsetMethod};
use crate::distance::{Domain, Regularity};
use crate::error::{Error, Result};
use crate::geometry::Shape;
use crate::normal::lambda_profile;
use crate::reach::{estimate_reach, ReachParams};
use crate::singular::{analyze, central_set, cut_locus, high_ridge, skeleton};

/// Outcome of rebuilding `Ω = S_r` and reading the core back from it.
#[derive(Debug, Clone, Serialize)]
pub struct TubeLemmaReport {
    pub r: f64,
    pub h: f64,
    /// Largest distance to the core from the high ridge, skeleton, central
    /// set and cut locus of `S_r`, in that order.
    pub set_distance: [f64; 4],
    pub sets_ok: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_ok: bool,
}

impl TubeLemmaReport {
    pub fn passes(&self) -> bool {
        self.sets_ok && self.lambda_ok
    }
}

/// Builds the domain bounded by the exact offset at `r`.
pub fn tube_domain(shape: &Shape, r: f64) -> Result<Domain> {
    let ob = offset_boundary(shape, r, OffsetMethod::Analytic)?;
    let outer = (0..ob.loops.len())
        .max_by(|&a, &b| ob.loops[a].signed_area().abs().total_cmp(&ob.loops[b].signed_area().abs()))
        .ok_or(Error::EmptyShape)?;
    let prims = |i: usize| ob.pieces[i].iter().map(|p| p.prim.clone()).collect::<Vec<_>>();
    let holes = (0..ob.loops.len()).filter(|&i| i != outer).map(prims).collect();
    Domain::new(format!("{}_tube", shape.label), prims(outer), holes, Regularity::C1)
}

/// Checks that every singular set of `S_r` lies within `2h` of the core and
/// that the normal distance of `S_r` is `r` within `2h`.
pub fn tube_lemma_check(shape: &Shape, r: f64, h: f64) -> Result<TubeLemmaReport> {
    let reach = estimate_reach(shape, &ReachParams::default());
    if r >= reach.lower {
        return Err(Error::ReachExceeded { r, reach: reach.lower });
    }
    if shape.components().items.len() != 1 {
        return Err(Error::NotApplicable(format!("{} is not connected", shape.label)));
    }
    let domain = tube_domain(shape, r)?;
    let sf = analyze(&domain, h)?;
    let (_, high) = high_ridge(&sf)?;
    let sets = [high, skeleton(&sf), central_set(&sf), cut_locus(&sf)];
    let set_distance = sets.map(|s| s.iter().map(|q| shape.distance(*q)).fold(0.0, f64::max));
    let tol = 2.0 * h * (1.0 + 1e-9);
    let prof = lambda_profile(&domain, 200, h)?;
    Ok(TubeLemmaReport {
        r,
        h,
        set_distance,
        sets_ok: set_distance.iter().all(|d| *d <= tol),
        lambda_min: prof.min,
        lambda_max: prof.max,
        lambda_ok: (prof.min - r).abs() <= tol && (prof.max - r).abs() <= tol,
    })
}
