//! Contact sets `C_r(p) = ∂B_r(p) ∩ ∂S_r` for points `p` of a set of
//! positive reach, their classification, and the boundary points `S*`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Component, Point2, Shape};
use crate::reach::{estimate_reach, ReachParams};

/// Default tolerance on angular verdicts.
pub const TOL_ANGLE: f64 = 0.05;

/// Default angular sweep step.
pub const ANGULAR_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContactComponent {
    Point { angle: f64 },
    /// Counterclockwise from `start` to `start + sweep`.
    Arc { start: f64, sweep: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    TwoAntipodal,
    Semicircle,
    FullCircle,
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactSet {
    pub p: Point2,
    pub r: f64,
    pub step: f64,
    /// Membership tolerance on `|d_S(y) − r|`.
    pub tol: f64,
    pub components: Vec<ContactComponent>,
    pub classification: Classification,
}

impl ContactSet {
    /// Points of every component, arcs sampled at the sweep step.
    pub fn points(&self) -> Vec<Point2> {
        let mut out = Vec::new();
        for c in &self.components {
            match *c {
                ContactComponent::Point { angle } => out.push(Point2::from_polar(self.p, self.r, angle)),
                ContactComponent::Arc { start, sweep } => {
                    let k = (sweep / self.step).ceil().max(1.0) as usize;
                    out.extend((0..=k).map(|j| Point2::from_polar(self.p, self.r, start + sweep * j as f64 / k as f64)));
                }
            }
        }
        out
    }
}

/// Tolerance whose tangency window spans two sweep steps on each side.
fn membership_tol(r: f64, step: f64) -> f64 {
    (1e-9 * (1.0 + r)).max(2.0 * r * step * step)
}

/// Contact set of `p` at radius `r`, sweeping angles at `angular_step`.
pub fn contact_set(shape: &Shape, r: f64, p: Point2, angular_step: f64) -> Result<ContactSet> {
    let reach = estimate_reach(shape, &ReachParams::default());
    contact_set_below(shape, r, p, angular_step, reach.lower)
}

fn contact_set_below(shape: &Shape, r: f64, p: Point2, angular_step: f64, reach: f64) -> Result<ContactSet> {
    if shape.distance(p) > 1e-9 * shape.scale() {
        return Err(Error::NotOnSet(p));
    }
    if !(r > 0.0) || r >= reach {
        return Err(Error::ReachExceeded { r, reach });
    }
    let n = (TAU / angular_step).ceil() as usize;
    let step = TAU / n as f64;
    let tol = membership_tol(r, step);
    let pass: Vec<bool> = (0..n)
        .map(|k| (shape.distance(Point2::from_polar(p, r, k as f64 * step)) - r).abs() <= tol)
        .collect();
    let components = group(&pass, step, (2.0 * tol / r).sqrt());
    let mut cs = ContactSet { p, r, step, tol, components, classification: Classification::Other };
    cs.classification = classify(&cs, TOL_ANGLE);
    Ok(cs)
}

/// Runs of passing angles, merged across gaps of at most two steps.
/// Short runs become points; longer ones arcs trimmed by the tangency
/// overshoot `trim` at each end.
fn group(pass: &[bool], step: f64, trim: f64) -> Vec<ContactComponent> {
    let n = pass.len();
    if pass.iter().all(|b| *b) {
        return vec![ContactComponent::Arc { start: 0.0, sweep: TAU }];
    }
    let Some(first_fail) = pass.iter().position(|b| !*b) else { return Vec::new() };
    // walk once around the circle starting at a failing angle
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for j in 1..=n {
        let k = first_fail + j;
        if !pass[k % n] {
            continue;
        }
        match runs.last_mut() {
            Some(run) if k - run.1 <= 3 => run.1 = k,
            _ => runs.push((k, k)),
        }
    }
    if runs.len() > 1 {
        let (a, b) = (runs[0], *runs.last().unwrap());
        if a.0 + n - b.1 <= 3 {
            runs.pop();
            runs[0] = (b.0, a.1 + n);
        }
    }
    runs.into_iter()
        .map(|(a, b)| {
            let sweep = (b - a) as f64 * step;
            if sweep <= 6.0 * step {
                ContactComponent::Point { angle: (0.5 * (a + b) as f64 * step).rem_euclid(TAU) }
            } else if sweep + 2.0 * step >= TAU {
                ContactComponent::Arc { start: 0.0, sweep: TAU }
            } else {
                let t = trim.min(0.25 * sweep);
                ContactComponent::Arc { start: (a as f64 * step + t).rem_euclid(TAU), sweep: sweep - 2.0 * t }
            }
        })
        .collect()
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn classify(cs: &ContactSet, tol_angle: f64) -> Classification {
    match cs.components.as_slice() {
        [ContactComponent::Point { angle: a }, ContactComponent::Point { angle: b }] if (angle_gap(*a, *b) - PI).abs() <= tol_angle => {
            Classification::TwoAntipodal
        }
        [ContactComponent::Arc { sweep, .. }] if (sweep - TAU).abs() <= 1e-12 => Classification::FullCircle,
        [ContactComponent::Arc { sweep, .. }] if (sweep - PI).abs() <= tol_angle => Classification::Semicircle,
        _ => Classification::Other,
    }
}

/// Core points `p` sampled every `step` with the classification of `C_r(p)`.
pub fn contact_ladder(shape: &Shape, r: f64, step: f64, angular_step: f64) -> Result<Vec<(Point2, Classification)>> {
    let reach = estimate_reach(shape, &ReachParams::default()).lower;
    if !(r > 0.0) || r >= reach {
        return Err(Error::ReachExceeded { r, reach });
    }
    shape
        .sample(step)
        .par_iter()
        .map(|s| Ok((s.point, contact_set_below(shape, r, s.point, angular_step, reach)?.classification)))
        .collect()
}

/// The boundary points `S*`: samples whose contact set is a semicircle.
/// About `samples` points are taken along the set.
pub fn boundary_points(shape: &Shape, r: f64, samples: usize) -> Result<Vec<Point2>> {
    let comps = shape.components();
    if comps.items.iter().all(|c| matches!(c, Component::Isolated(_))) {
        return Err(Error::NotApplicable(format!("{} is a finite set of points", shape.label)));
    }
    let step = shape.length() / samples.max(1) as f64;
    Ok(contact_ladder(shape, r, step, ANGULAR_STEP)?
        .into_iter()
        .filter(|(_, c)| *c == Classification::Semicircle)
        .map(|(p, _)| p)
        .collect())
}
