//! Planar star-shaped bodies stored as radial functions on a uniform angle grid.
//!
//! A [`StarBody2D`] with grid size `m` holds `r[i] = r_K(θ_i)` at
//! `θ_i = 2πi/m`. Between grid angles the radial function is interpolated
//! linearly in angle. Reflections in grid-aligned hyperplanes are exact index
//! permutations; Minkowski sums go through an occupancy raster (see [`raster`])
//! and carry a tolerance expressed in cell widths.

pub mod generators;
pub mod raster;

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::geom::Direction;

pub use raster::Raster;

/// Default FFT side length for raster Minkowski sums.
pub const DEFAULT_RASTER_G: usize = 1024;
/// Largest accepted FFT side length.
pub const MAX_RASTER_G: usize = 8192;
/// Cells kept free so the cyclic convolution never wraps.
const RASTER_MARGIN: usize = 10;
/// Cell widths per unit of raster tolerance τ.
pub const TOLERANCE_CELLS: f64 = 4.0;

/// Radial function of a star body on a uniform `m`-angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StarBody2D {
    r: Vec<f64>,
}

/// A grid direction `e(2πk/m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridAngle {
    k: usize,
    m: usize,
}

impl GridAngle {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if m == 0 || k >= m {
            return Err(invalid(format!("grid angle index {k} outside 0..{m}")));
        }
        Ok(Self { k, m })
    }

    /// The grid angle pointing along `d`, if `d` lies on the grid.
    pub fn from_direction(d: &Direction, m: usize) -> Result<Self> {
        if d.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: d.dim() });
        }
        let t = d.angle() * m as f64 / (2.0 * PI);
        let k = t.round();
        if (t - k).abs() > 1e-9 {
            return Err(Error::NotGridAligned { m });
        }
        Self::new(k as usize % m, m)
    }

    pub fn index(&self) -> usize {
        self.k
    }

    pub fn grid_size(&self) -> usize {
        self.m
    }

    pub fn radians(&self) -> f64 {
        2.0 * PI * self.k as f64 / self.m as f64
    }

    pub fn direction(&self) -> Direction {
        Direction::from_angle(self.radians())
    }
}

/// Result of a raster Minkowski operation.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterSum {
    pub body: StarBody2D,
    /// Side length of one raster cell.
    pub cell_width: f64,
}

impl RasterSum {
    /// Raster tolerance τ, four cell widths of the sum raster.
    pub fn tolerance(&self) -> f64 {
        TOLERANCE_CELLS * self.cell_width
    }
}

fn cos_table(m: usize) -> Vec<f64> {
    (0..m).map(|i| (2.0 * PI * i as f64 / m as f64).cos()).collect()
}

impl StarBody2D {
    /// Validates `r`: `m = r.len()` even and at least 8, all values finite and `≥ 0`.
    pub fn new(r: Vec<f64>) -> Result<Self> {
        let m = r.len();
        if m < 8 || m % 2 != 0 {
            return Err(invalid(format!("grid size must be even and >= 8, got {m}")));
        }
        if let Some(bad) = r.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid(format!("radial values must be finite and >= 0, got {bad}")));
        }
        Ok(Self { r })
    }

    pub fn m(&self) -> usize {
        self.r.len()
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn into_radii(self) -> Vec<f64> {
        self.r
    }

    /// Radial function at any angle, linear between grid angles.
    pub fn radial_eval(&self, theta: f64) -> f64 {
        let m = self.m();
        let mut t = theta.rem_euclid(2.0 * PI) * m as f64 / (2.0 * PI);
        if (t - t.round()).abs() < 1e-9 {
            t = t.round();
        }
        if t >= m as f64 {
            t -= m as f64;
        }
        let i = (t.floor() as usize) % m;
        let f = (t - i as f64).clamp(0.0, 1.0);
        self.r[i] * (1.0 - f) + self.r[(i + 1) % m] * f
    }

    /// Image under the reflection in `u^⊥`, `u = e(2πa/m)`:
    /// `r'[i] = r[(2a + m/2 − i) mod m]`.
    pub fn reflect_body(&self, a: GridAngle) -> Result<Self> {
        let m = self.m();
        if a.m != m {
            return Err(Error::GridMismatch { body: m, angle: a.m });
        }
        let shift = 2 * a.k + m / 2;
        let r = (0..m).map(|i| self.r[(shift + m - i) % m]).collect();
        Ok(Self { r })
    }

    /// Rotation by `k` grid steps counter-clockwise, an exact index shift.
    pub fn rotated(&self, k: usize) -> Self {
        let m = self.m();
        Self { r: (0..m).map(|i| self.r[(i + m - k % m) % m]).collect() }
    }

    /// Dilation about the origin, exact on the radial function.
    pub fn scaled(&self, s: f64) -> Self {
        assert!(s.is_finite() && s >= 0.0, "scale factor must be finite and >= 0");
        Self { r: self.r.iter().map(|v| v * s).collect() }
    }

    /// Largest `ρ` with `ρD ⊆ K`; the minimum of the radial function.
    pub fn inner_radius(&self) -> f64 {
        self.r.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Smallest `ρ` with `K ⊆ ρD`.
    pub fn outer_radius(&self) -> f64 {
        self.r.iter().copied().fold(0.0, f64::max)
    }

    /// `max_i |r[i] − rho|`, an upper bound for the Hausdorff distance to `ρD`.
    pub fn radial_distance(&self, rho: f64) -> f64 {
        self.r.iter().map(|v| (v - rho).abs()).fold(0.0, f64::max)
    }

    /// `h_K(d) = max_i r[i] ⟨e(θ_i), d⟩`, clamped at 0 (the origin is in `K`).
    pub fn support_eval(&self, d: &Direction) -> Result<f64> {
        if d.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: d.dim() });
        }
        Ok(self.support_at_angle(d.angle()))
    }

    pub fn support_at_angle(&self, phi: f64) -> f64 {
        let m = self.m() as f64;
        self.r
            .iter()
            .enumerate()
            .map(|(i, r)| r * (2.0 * PI * i as f64 / m - phi).cos())
            .fold(0.0, f64::max)
    }

    /// Support values at every grid direction.
    pub fn support_values(&self) -> Vec<f64> {
        let m = self.m();
        let cos = cos_table(m);
        (0..m)
            .map(|k| (0..m).map(|i| self.r[i] * cos[(i + m - k) % m]).fold(0.0, f64::max))
            .collect()
    }

    /// Mean width: grid average of the support function.
    pub fn mean_width(&self) -> f64 {
        let h = self.support_values();
        h.iter().sum::<f64>() / h.len() as f64
    }

    /// Largest distance from a point `(1 − ε) e(θ_i)` to the fan of segments
    /// `[0, r[j] e(θ_j)]`.
    pub fn net_distance(&self, eps: f64) -> f64 {
        let m = self.m();
        let cos = cos_table(m);
        let rho = 1.0 - eps;
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let proj = rho * cos[(i + m - j) % m];
                        let t = proj.clamp(0.0, self.r[j]);
                        (rho * rho - 2.0 * t * proj + t * t).max(0.0)
                    })
                    .fold(f64::INFINITY, f64::min)
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Whether `(1 − ε) e(θ_i)` is within `2√ε` of `K` for every grid angle.
    pub fn net_contained(&self, eps: f64) -> Result<bool> {
        self.net_contained_within(eps, 0.0)
    }

    /// As [`net_contained`](Self::net_contained) with the radius relaxed by `slack`.
    pub fn net_contained_within(&self, eps: f64, slack: f64) -> Result<bool> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("net accuracy must lie in (0, 1), got {eps}")));
        }
        Ok(self.net_distance(eps) <= 2.0 * eps.sqrt() + slack + 1e-12)
    }

    /// Inner and outer radius of the convex hull, computed exactly from the
    /// hull of the vertices `r[i] e(θ_i)` and the origin.
    pub fn hull_radii(&self) -> (f64, f64) {
        let m = self.m();
        let mut pts: Vec<(f64, f64)> = (0..m)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / m as f64;
                (self.r[i] * t.cos(), self.r[i] * t.sin())
            })
            .collect();
        pts.push((0.0, 0.0));
        let hull = convex_hull(pts);
        let inner = if hull.len() < 3 {
            0.0
        } else {
            (0..hull.len())
                .map(|k| {
                    let (a, b) = (hull[k], hull[(k + 1) % hull.len()]);
                    let (ex, ey) = (b.0 - a.0, b.1 - a.1);
                    let len = (ex * ex + ey * ey).sqrt();
                    // Counter-clockwise hull: the origin is on the left of every edge.
                    ((ex * (-a.1) - ey * (-a.0)) / len).max(0.0)
                })
                .fold(f64::INFINITY, f64::min)
        };
        (inner, self.outer_radius())
    }
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn check_resolution(g: usize) -> Result<()> {
    if g > MAX_RASTER_G {
        return Err(Error::ResolutionTooLarge { requested: g, limit: MAX_RASTER_G });
    }
    if g < 32 || !g.is_power_of_two() {
        return Err(invalid(format!("raster size must be a power of two >= 32, got {g}")));
    }
    Ok(())
}

/// `A + B` through an occupancy raster with FFT side length `g`.
///
/// The raster covers a square of side about `2(ρ_out(A) + ρ_out(B))`; the
/// result's radial function is the exit point of the farthest occupied cell
/// along each grid ray, which is valid because a sum of star bodies is star-shaped.
pub fn minkowski_sum(a: &StarBody2D, b: &StarBody2D, g: usize) -> Result<RasterSum> {
    check_resolution(g)?;
    let m = a.m();
    if b.m() != m {
        return Err(Error::GridMismatch { body: m, angle: b.m() });
    }
    let (ra, rb) = (a.outer_radius(), b.outer_radius());
    if ra + rb == 0.0 {
        return Ok(RasterSum { body: a.clone(), cell_width: 0.0 });
    }
    let cell = 2.0 * (ra + rb) / (g - RASTER_MARGIN) as f64;
    let half_a = (ra / cell).ceil() as usize + 1;
    let half_b = (rb / cell).ceil() as usize + 1;
    let raster_a = Raster::rasterize(a, cell, half_a);
    let raster_b = Raster::rasterize(b, cell, half_b);
    let sum = raster::convolve(&raster_a, &raster_b, g);
    let body = StarBody2D::new(sum.radial_extract(m))?;
    Ok(RasterSum { body, cell_width: cell })
}

/// Minkowski symmetral `M_u K = (K + R_u K) / 2` for the grid direction `a`.
///
/// Computed in the frame rotated so that `u = e(0)`, where `R_u` mirrors the
/// raster columns exactly; the result is therefore exactly symmetric.
pub fn symmetral(k: &StarBody2D, a: GridAngle, g: usize) -> Result<RasterSum> {
    check_resolution(g)?;
    let m = k.m();
    if a.m != m {
        return Err(Error::GridMismatch { body: m, angle: a.m });
    }
    let rho = k.outer_radius();
    if rho == 0.0 {
        return Ok(RasterSum { body: k.clone(), cell_width: 0.0 });
    }
    let local = k.rotated(m - a.k);
    let cell = 4.0 * rho / (g - RASTER_MARGIN) as f64;
    let half = (rho / cell).ceil() as usize + 1;
    let raster = Raster::rasterize(&local, cell, half);
    let mirrored = raster.mirrored_x();
    let sum = raster::convolve(&raster, &mirrored, g);
    let mut r = sum.radial_extract(m);
    // Rays i and m/2 - i are mirror images; copy to remove rounding asymmetry.
    for i in 0..m {
        let j = (m / 2 + m - i) % m;
        if j < i {
            r[i] = r[j];
        }
    }
    let body = StarBody2D::new(r)?.scaled(0.5).rotated(a.k);
    Ok(RasterSum { body, cell_width: cell })
}

#[cfg(test)]
mod tests {
    use super::generators::*;
    use super::*;

    fn disc(rho: f64) -> StarBody2D {
        gen_disc(720, rho).unwrap()
    }

    #[test]
    fn rejects_invalid_grids() {
        assert!(StarBody2D::new(vec![1.0; 7]).is_err());
        assert!(StarBody2D::new(vec![1.0; 9]).is_err());
        assert!(StarBody2D::new(vec![-1.0; 8]).is_err());
        assert!(StarBody2D::new(vec![f64::NAN; 8]).is_err());
    }

    #[test]
    fn radial_eval_interpolates() {
        assert_eq!(disc(1.0).radial_eval(1.234), 1.0);
        let m = 8;
        let mut r = vec![0.0; m];
        r[0] = 2.0;
        let k = StarBody2D::new(r).unwrap();
        assert!((k.radial_eval(PI / m as f64) - 1.0).abs() < 1e-12);
        assert_eq!(k.radial_eval(0.0), 2.0);
        assert!((k.radial_eval(2.0 * PI) - 2.0).abs() < 1e-12);
        assert_eq!(k.radial_eval(2.0 * PI - 1e-13), 2.0);
        let spiky = gen_spiky(720, 12, 1.0, 0.2).unwrap();
        assert_eq!(spiky.radial_eval(2.0 * PI * 60.0 / 720.0), 1.0);
    }

    #[test]
    fn reflect_body_examples() {
        let d = disc(1.0);
        assert_eq!(d.reflect_body(GridAngle::new(17, 720).unwrap()).unwrap(), d);
        let spike = gen_segment(720, 1.0, 0).unwrap();
        let r = spike.reflect_body(GridAngle::new(0, 720).unwrap()).unwrap();
        assert_eq!(r.radii()[360], 1.0);
        assert_eq!(r.radii().iter().filter(|&&v| v > 0.0).count(), 1);
        let k = gen_random_star(9, 720, 0.1, 1.0).unwrap();
        for a in [0, 1, 77, 359, 719] {
            let a = GridAngle::new(a, 720).unwrap();
            assert_eq!(k.reflect_body(a).unwrap().reflect_body(a).unwrap(), k);
        }
    }

    #[test]
    fn reflect_body_agrees_with_point_reflection() {
        let k = gen_random_star(4, 64, 0.1, 1.0).unwrap();
        let a = GridAngle::new(5, 64).unwrap();
        let refl = k.reflect_body(a).unwrap();
        let u = a.direction();
        for i in 0..64 {
            let d = Direction::from_angle(2.0 * PI * i as f64 / 64.0);
            let img = u.reflect_dir(&d).unwrap();
            let j = GridAngle::from_direction(&img, 64).unwrap().index();
            assert_eq!(refl.radii()[j], k.radii()[i]);
        }
    }

    #[test]
    fn grid_mismatch_and_alignment_errors() {
        let k = disc(1.0);
        assert_eq!(
            k.reflect_body(GridAngle::new(0, 360).unwrap()),
            Err(Error::GridMismatch { body: 720, angle: 360 })
        );
        assert_eq!(
            GridAngle::from_direction(&Direction::from_angle(0.001), 720),
            Err(Error::NotGridAligned { m: 720 })
        );
        assert_eq!(GridAngle::from_direction(&Direction::from_angle(PI), 720).unwrap().index(), 360);
    }

    #[test]
    fn rotation_is_an_index_shift() {
        let k = gen_random_star(2, 720, 0.1, 1.0).unwrap();
        assert_eq!(k.rotated(10).radii()[10], k.radii()[0]);
        assert_eq!(k.rotated(720), k);
        assert_eq!(k.rotated(5).rotated(715), k);
    }

    #[test]
    fn radii_examples() {
        assert_eq!((disc(1.0).inner_radius(), disc(1.0).outer_radius()), (1.0, 1.0));
        let s = gen_spiky(720, 12, 1.0, 0.2).unwrap();
        assert_eq!((s.inner_radius(), s.outer_radius()), (0.2, 1.0));
    }

    #[test]
    fn support_and_mean_width() {
        let d = disc(1.0);
        assert!((d.mean_width() - 1.0).abs() < 1e-12);
        assert!((d.support_eval(&Direction::from_angle(0.3)).unwrap() - 1.0).abs() < 1e-4);
        let seg = gen_segment(720, 1.0, 0).unwrap();
        assert!((seg.mean_width() - 1.0 / PI).abs() < 1e-4);
        let h = seg.support_values();
        for (k, v) in h.iter().enumerate() {
            let expected = (2.0 * PI * k as f64 / 720.0).cos().max(0.0);
            assert!((v - expected).abs() < 1e-12);
        }
        assert!(seg.support_eval(&Direction::axis(3, 0).unwrap()).is_err());
    }

    #[test]
    fn net_containment_examples() {
        let eps = 0.01;
        assert!(disc(1.0 - eps).net_contained(eps).unwrap());
        assert!(!gen_segment(720, 1.0, 0).unwrap().net_contained(eps).unwrap());
        assert!(disc(1.0).net_contained(0.0).is_err());
    }

    #[test]
    fn hull_radii_of_a_square_diamond() {
        let mut r = vec![0.0; 8];
        for k in [0, 2, 4, 6] {
            r[k] = 1.0;
        }
        let (inner, outer) = StarBody2D::new(r).unwrap().hull_radii();
        assert!((inner - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(outer, 1.0);
        let (inner, _) = gen_segment(720, 1.0, 3).unwrap().hull_radii();
        assert_eq!(inner, 0.0);
    }

    #[test]
    fn disc_sum_and_identity() {
        let s = minkowski_sum(&disc(1.0), &disc(0.5), 1024).unwrap();
        assert!(s.body.radial_distance(1.5) <= 2.0 * s.cell_width, "{}", s.body.radial_distance(1.5));

        // Radial errors grow like cell / sin(ray-boundary angle), so keep the boundary gentle.
        let k = gen_random_star(1, 720, 0.9, 1.0).unwrap();
        let zero = StarBody2D::new(vec![0.0; 720]).unwrap();
        let s = minkowski_sum(&k, &zero, 1024).unwrap();
        let err = k.radii().iter().zip(s.body.radii()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= s.cell_width, "{err} vs {}", s.cell_width);
    }

    #[test]
    fn sum_rejects_bad_resolution() {
        let d = disc(1.0);
        assert!(minkowski_sum(&d, &d, 1000).is_err());
        assert!(matches!(minkowski_sum(&d, &d, 16_384), Err(Error::ResolutionTooLarge { .. })));
    }

    #[test]
    fn symmetral_fixes_the_disc() {
        let s = symmetral(&disc(1.0), GridAngle::new(33, 720).unwrap(), 1024).unwrap();
        assert!(s.body.radial_distance(1.0) <= 2.0 * s.cell_width);
    }

    #[test]
    fn symmetral_of_a_segment_is_centered() {
        let seg = gen_segment(720, 1.0, 0).unwrap();
        let s = symmetral(&seg, GridAngle::new(0, 720).unwrap(), 1024).unwrap();
        let tau = s.tolerance();
        assert!((s.body.radii()[0] - 0.5).abs() <= 2.0 * s.cell_width);
        assert!((s.body.radii()[360] - 0.5).abs() <= 2.0 * s.cell_width);
        // (K + R_u K)/2 = [-u/2, u/2] has support |cos θ| / 2.
        for (k, v) in s.body.support_values().iter().enumerate() {
            let expected = 0.5 * (2.0 * PI * k as f64 / 720.0).cos().abs();
            assert!((v - expected).abs() <= tau, "{k}: {v} vs {expected}");
        }
    }

    #[test]
    fn symmetral_is_symmetric_about_its_axis() {
        let k = gen_random_spiky(12, 720, 12, (0.1, 0.4), (0.6, 1.0)).unwrap();
        let a = GridAngle::new(101, 720).unwrap();
        let s = symmetral(&k, a, 1024).unwrap();
        let back = s.body.reflect_body(a).unwrap();
        assert_eq!(back, s.body);
    }
}
