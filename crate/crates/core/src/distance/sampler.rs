use crate::geometry::{BBox, Point2};

const PLASTIC: f64 = 1.324_717_957_244_746;

/// Additive-recurrence (R2) sequence on the unit square.
///
/// The seed only shifts the sequence, so equal seeds reproduce equal points.
#[derive(Debug, Clone, Copy)]
pub struct LowDiscrepancy {
    pub seed: u64,
    offset: (f64, f64),
}

impl LowDiscrepancy {
    pub fn new(seed: u64) -> Self {
        let s = seed as f64;
        let offset = ((0.5 + s * 0.618_033_988_749_895).fract(), (0.5 + s * 0.414_213_562_373_095).fract());
        LowDiscrepancy { seed, offset }
    }

    /// The i-th point in `[0,1)²`.
    pub fn unit(&self, i: usize) -> (f64, f64) {
        let a1 = 1.0 / PLASTIC;
        let a2 = 1.0 / (PLASTIC * PLASTIC);
        let n = i as f64 + 1.0;
        ((self.offset.0 + a1 * n).fract(), (self.offset.1 + a2 * n).fract())
    }

    /// The i-th point mapped into `bbox`.
    pub fn in_box(&self, bbox: &BBox, i: usize) -> Point2 {
        let (u, v) = self.unit(i);
        Point2::new(bbox.min.x + u * bbox.width(), bbox.min.y + v * bbox.height())
    }

    /// An angle in `[0, 2π)` from the first coordinate of point `i`.
    pub fn angle(&self, i: usize) -> f64 {
        self.unit(i).0 * std::f64::consts::TAU
    }
}
