//! Convex bodies in `R^n` given by support values on a direction cloud.
//!
//! Two evaluation modes for the symmetral `h'(d) = (h(d) + h(R_u d)) / 2`:
//!
//! * exact: planar uniform grid with `u` on the grid, where `R_u` permutes the
//!   nodes;
//! * interpolated: everything else. `h(R_u d)` is an inverse-geodesic-distance
//!   average over the `n + 1` nearest nodes, and each result carries an error
//!   estimate from the oscillation of `h` over those nodes.
//!
//! Support values are stored as samples; they are not checked for being the
//! restriction of a true support function.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::geom::{CloudKind, Direction, SphereQuadrature};
use crate::star2d::{GridAngle, StarBody2D};

/// The segment `[0, R u]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBody {
    len: f64,
    u: Direction,
}

impl IntervalBody {
    pub fn new(len: f64, u: Direction) -> Result<Self> {
        if !(len.is_finite() && len > 0.0) {
            return Err(invalid(format!("interval length must be positive, got {len}")));
        }
        Ok(Self { len, u })
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn direction(&self) -> &Direction {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.dim()
    }
}

/// `R · max(0, ⟨u, d⟩)`.
pub fn interval_support(i: &IntervalBody, d: &Direction) -> Result<f64> {
    if d.dim() != i.dim() {
        return Err(Error::DimensionMismatch { expected: i.dim(), found: d.dim() });
    }
    Ok(i.len * i.u.dot(d.coords()).max(0.0))
}

/// Support values `h` aligned with the nodes of a shared cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportBody {
    cloud: Arc<SphereQuadrature>,
    h: Vec<f64>,
}

/// Output of [`SupportBody::symmetral_support`].
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSymmetral {
    pub body: SupportBody,
    /// True when every reflected node was itself a node.
    pub exact: bool,
    /// Largest per-node interpolation error estimate (0 in exact mode).
    pub max_error: f64,
    /// Quadrature-weighted mean of the per-node estimates; bounds the mean-width drift.
    pub mean_error: f64,
}

impl SupportBody {
    pub fn new(cloud: Arc<SphereQuadrature>, h: Vec<f64>) -> Result<Self> {
        if h.len() != cloud.len() {
            return Err(Error::DimensionMismatch { expected: cloud.len(), found: h.len() });
        }
        if h.iter().any(|v| !v.is_finite()) {
            return Err(invalid("support values must be finite"));
        }
        Ok(Self { cloud, h })
    }

    pub fn from_fn(cloud: Arc<SphereQuadrature>, f: impl Fn(&Direction) -> f64) -> Result<Self> {
        let h = cloud.nodes().iter().map(f).collect();
        Self::new(cloud, h)
    }

    pub fn ball(cloud: Arc<SphereQuadrature>, rho: f64) -> Result<Self> {
        let h = vec![rho; cloud.len()];
        Self::new(cloud, h)
    }

    pub fn from_interval(cloud: Arc<SphereQuadrature>, i: &IntervalBody) -> Result<Self> {
        if i.dim() != cloud.dim() {
            return Err(Error::DimensionMismatch { expected: cloud.dim(), found: i.dim() });
        }
        Self::from_fn(cloud, |d| i.len * i.u.dot(d.coords()).max(0.0))
    }

    /// Support function of `conv K` on the body's own angle grid.
    pub fn from_star(k: &StarBody2D) -> Result<Self> {
        let cloud = Arc::new(SphereQuadrature::from_kind(CloudKind::Grid { m: k.m() })?);
        Self::new(cloud, k.support_values())
    }

    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }

    pub fn cloud(&self) -> &Arc<SphereQuadrature> {
        &self.cloud
    }

    pub fn values(&self) -> &[f64] {
        &self.h
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { cloud: Arc::clone(&self.cloud), h: self.h.iter().map(|v| v * s).collect() }
    }

    /// `M^*(K) = Σ w_i h_i`.
    pub fn mean_width(&self) -> f64 {
        self.cloud.integrate_values(&self.h)
    }

    /// `(min h, max h)` over the cloud. Fails when the origin is outside.
    pub fn sandwich_radii(&self) -> Result<(f64, f64)> {
        let lo = self.h.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo < -1e-12 {
            return Err(Error::OriginOutside { value: lo });
        }
        Ok((lo.max(0.0), hi))
    }

    /// `max_i |h_i − rho|`.
    pub fn sup_distance(&self, rho: f64) -> f64 {
        self.h.iter().map(|v| (v - rho).abs()).fold(0.0, f64::max)
    }

    /// Node permutation realizing `R_u` when it exists (planar grid, `u` on the grid).
    fn grid_permutation(&self, u: &Direction) -> Option<Vec<usize>> {
        let m = self.cloud.grid_size()?;
        if m % 2 != 0 {
            return None;
        }
        let a = GridAngle::from_direction(u, m).ok()?.index();
        let shift = 2 * a + m / 2;
        Some((0..m).map(|k| (shift + m - k % m) % m).collect())
    }

    /// Interpolated support value at an arbitrary direction with its error
    /// estimate (half the oscillation over the neighbours).
    pub fn interpolate(&self, x: &[f64]) -> (f64, f64) {
        let k = (self.dim() + 1).min(self.h.len());
        let nn = self.cloud.nearest(x, k);
        if nn[0].1 < 1e-12 {
            return (self.h[nn[0].0], 0.0);
        }
        let (mut num, mut den) = (0.0, 0.0);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(i, dist) in &nn {
            let w = 1.0 / dist;
            num += w * self.h[i];
            den += w;
            lo = lo.min(self.h[i]);
            hi = hi.max(self.h[i]);
        }
        (num / den, 0.5 * (hi - lo))
    }

    /// Minkowski symmetral via support averaging, `h'(d) = (h(d) + h(R_u d)) / 2`.
    pub fn symmetral_support(&self, u: &Direction) -> Result<SupportSymmetral> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        if let Some(perm) = self.grid_permutation(u) {
            let h = (0..self.h.len()).map(|k| 0.5 * (self.h[k] + self.h[perm[k]])).collect();
            return Ok(SupportSymmetral {
                body: Self { cloud: Arc::clone(&self.cloud), h },
                exact: true,
                max_error: 0.0,
                mean_error: 0.0,
            });
        }
        let mut h = Vec::with_capacity(self.h.len());
        let mut errors = Vec::with_capacity(self.h.len());
        for (k, d) in self.cloud.nodes().iter().enumerate() {
            let img = u.reflect_dir(d)?;
            let (v, e) = self.interpolate(img.coords());
            h.push(0.5 * (self.h[k] + v));
            errors.push(0.5 * e);
        }
        let max_error = errors.iter().copied().fold(0.0, f64::max);
        let mean_error = self.cloud.integrate_values(&errors);
        Ok(SupportSymmetral {
            body: Self { cloud: Arc::clone(&self.cloud), h },
            exact: false,
            max_error,
            mean_error,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geom::{random_direction, sphere_quadrature, SeedStream};

    fn grid(m: usize) -> Arc<SphereQuadrature> {
        Arc::new(sphere_quadrature(2, m).unwrap())
    }

    fn unit_interval(n: usize) -> IntervalBody {
        IntervalBody::new(1.0, Direction::axis(n, 0).unwrap()).unwrap()
    }

    #[test]
    fn interval_support_examples() {
        let i = unit_interval(2);
        let e1 = Direction::axis(2, 0).unwrap();
        assert_eq!(interval_support(&i, &e1).unwrap(), 1.0);
        assert_eq!(interval_support(&i, &Direction::new(vec![-1.0, 0.0]).unwrap()).unwrap(), 0.0);
        assert_eq!(interval_support(&i, &Direction::axis(2, 1).unwrap()).unwrap(), 0.0);
        assert!(interval_support(&i, &Direction::axis(3, 0).unwrap()).is_err());
        assert!(IntervalBody::new(0.0, e1).is_err());
    }

    #[test]
    fn ball_is_fixed() {
        let b = SupportBody::ball(grid(720), 2.5).unwrap();
        let s = b.symmetral_support(&Direction::from_angle(PI / 3.0)).unwrap();
        assert!(s.exact);
        assert_eq!(s.body, b);
        let b3 = SupportBody::ball(Arc::new(sphere_quadrature(3, 512).unwrap()), 1.0).unwrap();
        let u = random_direction(3, &mut SeedStream::new(1)).unwrap();
        let s3 = b3.symmetral_support(&u).unwrap();
        assert!(!s3.exact);
        assert!(s3.body.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn interval_symmetral_closed_form() {
        let i = SupportBody::from_interval(grid(720), &unit_interval(2)).unwrap();
        // u = e(0): reflection sends e1 to -e1, giving the centered segment.
        let s = i.symmetral_support(&Direction::from_angle(0.0)).unwrap();
        assert!(s.exact);
        for (d, v) in s.body.cloud().nodes().iter().zip(s.body.values()) {
            assert!((v - 0.5 * d.coords()[0].abs()).abs() < 1e-12);
        }
        // u = e(π/2): e1 lies on the mirror, nothing changes.
        let t = i.symmetral_support(&Direction::from_angle(PI / 2.0)).unwrap();
        for (a, b) in t.body.values().iter().zip(i.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_mode_conserves_mean_width_and_is_idempotent() {
        let k = crate::star2d::generators::gen_random_star(8, 720, 0.1, 1.0).unwrap();
        let h = SupportBody::from_star(&k).unwrap();
        let mut s = SeedStream::new(8);
        for _ in 0..50 {
            use rand::Rng;
            let a = GridAngle::new(s.rng().random_range(0..720), 720).unwrap();
            let once = h.symmetral_support(&a.direction()).unwrap().body;
            assert!((once.mean_width() - h.mean_width()).abs() <= 1e-12);
            let twice = once.symmetral_support(&a.direction()).unwrap().body;
            assert!(once.values().iter().zip(twice.values()).all(|(x, y)| (x - y).abs() <= 1e-12));
            let (lo0, hi0) = h.sandwich_radii().unwrap();
            let (lo1, hi1) = once.sandwich_radii().unwrap();
            assert!(lo1 >= lo0 && hi1 <= hi0);
        }
    }

    #[test]
    fn mean_width_of_intervals() {
        let b = SupportBody::ball(grid(720), 1.7).unwrap();
        assert!((b.mean_width() - 1.7).abs() < 1e-12);
        let i2 = SupportBody::from_interval(grid(720), &unit_interval(2)).unwrap();
        assert!((i2.mean_width() - 1.0 / PI).abs() < 1e-4);
        let i3 = SupportBody::from_interval(Arc::new(sphere_quadrature(3, 2048).unwrap()), &unit_interval(3)).unwrap();
        assert!((i3.mean_width() - 0.25).abs() < 1e-3);
    }

    #[test]
    fn sandwich_radii_examples() {
        assert_eq!(SupportBody::ball(grid(64), 2.0).unwrap().sandwich_radii().unwrap(), (2.0, 2.0));
        let i = SupportBody::from_interval(grid(64), &unit_interval(2)).unwrap();
        let (lo, hi) = i.sandwich_radii().unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - 1.0).abs() < 1e-12);
        let bad = SupportBody::new(grid(8), vec![-0.5, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(bad.sandwich_radii(), Err(Error::OriginOutside { .. })));
    }

    #[test]
    fn interpolated_mean_width_drift_is_covered_by_the_estimate() {
        let cloud = Arc::new(sphere_quadrature(3, 2048).unwrap());
        let mut body = SupportBody::from_interval(Arc::clone(&cloud), &unit_interval(3)).unwrap();
        let mut s = SeedStream::new(77);
        for _ in 0..10 {
            let u = random_direction(3, &mut s).unwrap();
            let next = body.symmetral_support(&u).unwrap();
            let drift = (next.body.mean_width() - body.mean_width()).abs();
            // The estimate bounds the drift up to the quadrature error itself.
            assert!(drift <= next.mean_error + 1e-3, "{drift} > {}", next.mean_error);
            body = next.body;
        }
    }

    #[test]
    fn dimension_checks() {
        let b = SupportBody::ball(grid(64), 1.0).unwrap();
        assert!(b.symmetral_support(&Direction::axis(3, 0).unwrap()).is_err());
        assert!(SupportBody::new(grid(64), vec![1.0; 10]).is_err());
    }
}
