use serde::{Deserialize, Serialize};

use super::Point2;

/// Distance from a query point together with its nearest points.
///
/// When `continuum` is set the nearest set is a whole arc; `projections`
/// then holds a few representatives of it and `multiplicity` counts those.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionResult {
    pub distance: f64,
    pub projections: Vec<Point2>,
    pub continuum: bool,
    pub multiplicity: usize,
}

impl ProjectionResult {
    pub fn single(distance: f64, p: Point2) -> Self {
        Self { distance, projections: vec![p], continuum: false, multiplicity: 1 }
    }

    pub fn is_unique(&self) -> bool {
        !self.continuum && self.multiplicity == 1
    }

    /// First reported nearest point.
    pub fn nearest(&self) -> Point2 {
        self.projections[0]
    }

    /// Diameter of the reported nearest-point set.
    pub fn spread(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, a) in self.projections.iter().enumerate() {
            for b in &self.projections[i + 1..] {
                best = best.max(a.dist(*b));
            }
        }
        best
    }

    pub(crate) fn push_dedup(&mut self, p: Point2, dup: f64) {
        if self.projections.iter().all(|q| q.dist(p) > dup) {
            self.projections.push(p);
        }
        self.multiplicity = self.projections.len();
    }
}
