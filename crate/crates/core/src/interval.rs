use crate::error::{GaugeError, Result};

/// A compact interval [lo, hi] with lo < hi. Degenerate requests are rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(GaugeError::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        Interval::new(lo, hi).ok()
    }
}

/// A finite strictly increasing list of points from span.lo to span.hi.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    points: Vec<f64>,
}

impl Partition {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(GaugeError::InvalidArgument(
                "partition needs at least two points".into(),
            ));
        }
        for w in points.windows(2) {
            if !(w[0] < w[1]) {
                return Err(GaugeError::InvalidArgument(format!(
                    "partition points must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Partition { points })
    }

    /// n equal cells over span.
    pub fn uniform(span: Interval, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GaugeError::InvalidArgument("need n >= 1 cells".into()));
        }
        let mut points = Vec::with_capacity(n + 1);
        for j in 0..=n {
            points.push(span.lo() + span.width() * (j as f64) / (n as f64));
        }
        // guard against rounding at the right end
        *points.last_mut().unwrap() = span.hi();
        Partition::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn span(&self) -> Interval {
        Interval::new(self.points[0], *self.points.last().unwrap()).unwrap()
    }

    pub fn n_cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn cells(&self) -> impl Iterator<Item = Interval> + '_ {
        self.points
            .windows(2)
            .map(|w| Interval::new(w[0], w[1]).unwrap())
    }

    pub fn mesh(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Insert the points of `other` (within our span) to form a common refinement.
    pub fn refine_with(&self, other: &Partition) -> Partition {
        let mut pts = self.points.clone();
        pts.extend(other.points.iter().copied());
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let span = self.span();
        pts.retain(|&p| span.contains(p));
        Partition::new(pts).unwrap()
    }
}

/// Geometric-ratio partition of [t0, 1]: points t_j = q^(n-j) with q = 1 - ratio_delta/2,
/// n minimal with t_0 < t0_max. Consecutive ratios t_{j-1}/t_j = q > 1 - ratio_delta.
pub fn geometric_partition(ratio_delta: f64, t0_max: f64) -> Result<Partition> {
    if !(ratio_delta > 0.0 && ratio_delta < 1.0) {
        return Err(GaugeError::InvalidArgument(
            "need 0 < ratio_delta < 1".into(),
        ));
    }
    if !(t0_max > 0.0 && t0_max < 1.0) {
        return Err(GaugeError::InvalidArgument("need 0 < t0_max < 1".into()));
    }
    let q = 1.0 - ratio_delta / 2.0;
    let mut n = 1usize;
    while q.powi(n as i32) >= t0_max {
        n += 1;
    }
    let mut points: Vec<f64> = (0..=n).map(|j| q.powi((n - j) as i32)).collect();
    *points.last_mut().unwrap() = 1.0;
    Partition::new(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_interval_rejected() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn uniform_partition_mesh() {
        let p = Partition::uniform(Interval::new(0.0, 1.0).unwrap(), 4).unwrap();
        assert_eq!(p.n_cells(), 4);
        assert!((p.mesh() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn geometric_partition_ratios() {
        let p = geometric_partition(0.5, 0.3).unwrap();
        let pts = p.points();
        assert!(pts[0] < 0.3);
        assert_eq!(*pts.last().unwrap(), 1.0);
        for w in pts.windows(2) {
            assert!(w[0] / w[1] > 0.5, "ratio {} too small", w[0] / w[1]);
        }
    }

    #[test]
    fn geometric_partition_mesh_scales_with_points() {
        // |t_j - t_{j-1}| < delta * t_j for the constructed points
        let delta = 0.05;
        let p = geometric_partition(delta, 0.5).unwrap();
        for w in p.points().windows(2) {
            assert!(w[1] - w[0] < delta * w[1]);
        }
    }
}
