//! Brute-force references for the fast paths.
//!
//! Nothing here calls into the raster or FFT code of [`crate::star2d`]: the
//! naive sum rasterizes with exact segment clipping, dilates with a double loop
//! over occupied cells and extracts radii with exact ray/square intersections.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::geom::{random_direction, Direction, SeedStream};
use crate::star2d::StarBody2D;
use crate::support::{interval_support, IntervalBody, SupportBody};

/// Largest raster side accepted by [`naive_minkowski_sum`].
pub const MAX_NAIVE_G: usize = 160;

/// Anything with a support function.
pub trait Support {
    fn dim(&self) -> usize;
    fn support(&self, d: &Direction) -> Result<f64>;
}

impl Support for StarBody2D {
    fn dim(&self) -> usize {
        2
    }

    fn support(&self, d: &Direction) -> Result<f64> {
        self.support_eval(d)
    }
}

impl Support for IntervalBody {
    fn dim(&self) -> usize {
        IntervalBody::dim(self)
    }

    fn support(&self, d: &Direction) -> Result<f64> {
        interval_support(self, d)
    }
}

impl Support for SupportBody {
    fn dim(&self) -> usize {
        SupportBody::dim(self)
    }

    fn support(&self, d: &Direction) -> Result<f64> {
        if d.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: d.dim() });
        }
        Ok(self.interpolate(d.coords()).0)
    }
}

/// Points sampled along the fan segments of a planar star body.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<[f64; 2]>,
}

impl PointCloud {
    /// `per_ray + 1` evenly spaced points on each segment `[0, r_i e(θ_i)]`,
    /// endpoints included.
    pub fn from_star(k: &StarBody2D, per_ray: usize) -> Result<Self> {
        if per_ray == 0 {
            return Err(invalid("need at least one sample per ray"));
        }
        let m = k.m();
        let mut points = Vec::with_capacity(m * (per_ray + 1));
        for (i, &r) in k.radii().iter().enumerate() {
            let theta = 2.0 * PI * i as f64 / m as f64;
            for j in 0..=per_ray {
                let t = r * j as f64 / per_ray as f64;
                points.push([t * theta.cos(), t * theta.sin()]);
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    /// Whether every point passes the radial test against `k`.
    pub fn inside(&self, k: &StarBody2D) -> bool {
        self.points.iter().all(|&[x, y]| {
            let rho = x.hypot(y);
            rho == 0.0 || rho <= k.radial_eval(y.atan2(x)) * (1.0 + 1e-12) + 1e-12
        })
    }
}

impl Support for PointCloud {
    fn dim(&self) -> usize {
        2
    }

    fn support(&self, d: &Direction) -> Result<f64> {
        if d.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: d.dim() });
        }
        let (c, s) = (d.coords()[0], d.coords()[1]);
        Ok(self.points.iter().map(|p| p[0] * c + p[1] * s).fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Dense square cell set indexed from `-half..=half` on both axes.
#[derive(Debug, Clone, PartialEq)]
struct CellSet {
    half: i64,
    cell: f64,
    on: Vec<bool>,
}

impl CellSet {
    fn new(half: i64, cell: f64) -> Self {
        let side = (2 * half + 1) as usize;
        Self { half, cell, on: vec![false; side * side] }
    }

    fn slot(&self, ix: i64, iy: i64) -> usize {
        let side = 2 * self.half + 1;
        ((iy + self.half) * side + (ix + self.half)) as usize
    }

    fn mark(&mut self, ix: i64, iy: i64) {
        if ix.abs() <= self.half && iy.abs() <= self.half {
            let k = self.slot(ix, iy);
            self.on[k] = true;
        }
    }

    fn occupied(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for iy in -self.half..=self.half {
            for ix in -self.half..=self.half {
                if self.on[self.slot(ix, iy)] {
                    out.push((ix, iy));
                }
            }
        }
        out
    }
}

/// Parameter interval of `p + t·v`, `t ∈ [t0, t1]`, inside the axis box
/// `[lo, hi]²`, by slab clipping.
fn clip(p: [f64; 2], v: [f64; 2], lo: [f64; 2], hi: [f64; 2], mut t0: f64, mut t1: f64) -> Option<(f64, f64)> {
    for axis in 0..2 {
        if v[axis].abs() < 1e-300 {
            if p[axis] < lo[axis] || p[axis] > hi[axis] {
                return None;
            }
            continue;
        }
        let (a, b) = ((lo[axis] - p[axis]) / v[axis], (hi[axis] - p[axis]) / v[axis]);
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
        if t0 > t1 {
            return None;
        }
    }
    Some((t0, t1))
}

fn cell_box(ix: i64, iy: i64, cell: f64) -> ([f64; 2], [f64; 2]) {
    let (cx, cy) = (ix as f64 * cell, iy as f64 * cell);
    ([cx - 0.5 * cell, cy - 0.5 * cell], [cx + 0.5 * cell, cy + 0.5 * cell])
}

/// Radial value between grid angles, linear in angle; written out again here
/// so the oracle does not lean on the subject's accessor.
fn radial_at(r: &[f64], theta: f64) -> f64 {
    let m = r.len();
    let t = theta.rem_euclid(2.0 * PI) / (2.0 * PI) * m as f64;
    let i = t.floor();
    let f = t - i;
    let i = i as usize % m;
    r[i] + (r[(i + 1) % m] - r[i]) * f
}

/// Cells whose center lies in the body or within half a cell of a fan segment
/// (perpendicularly, over the segment's length), and the origin cell.
fn cells_of(k: &StarBody2D, cell: f64, half: i64) -> CellSet {
    let mut set = CellSet::new(half, cell);
    let r = k.radii();
    for iy in -half..=half {
        for ix in -half..=half {
            let (x, y) = (ix as f64 * cell, iy as f64 * cell);
            if x.hypot(y) <= radial_at(r, y.atan2(x)) {
                set.mark(ix, iy);
            }
        }
    }
    set.mark(0, 0);
    let m = r.len();
    for (i, &len) in r.iter().enumerate() {
        if len == 0.0 {
            continue;
        }
        let theta = 2.0 * PI * i as f64 / m as f64;
        let (c, s) = (theta.cos(), theta.sin());
        // One cell per row or column along the dominant axis: a digital line.
        let band = 0.5 * cell * c.abs().max(s.abs());
        let reach = (len / cell).ceil() as i64 + 1;
        for iy in -reach..=reach {
            for ix in -reach..=reach {
                let (x, y) = (ix as f64 * cell, iy as f64 * cell);
                let along = x * c + y * s;
                let across = (y * c - x * s).abs();
                if (0.0..=len).contains(&along) && across <= band {
                    set.mark(ix, iy);
                }
            }
        }
    }
    set
}

fn dilate(a: &StarBody2D, b: &StarBody2D, g: usize) -> Result<CellSet> {
    if g > MAX_NAIVE_G {
        return Err(Error::ResolutionTooLarge { requested: g, limit: MAX_NAIVE_G });
    }
    if g < 8 {
        return Err(invalid(format!("raster side must be at least 8, got {g}")));
    }
    if a.m() != b.m() {
        return Err(Error::GridMismatch { body: a.m(), angle: b.m() });
    }
    let (ra, rb) = (a.outer_radius(), b.outer_radius());
    if ra + rb == 0.0 {
        return Err(Error::EmptyBody);
    }
    let cell = 2.0 * (ra + rb) / g as f64;
    let (ha, hb) = ((ra / cell).ceil() as i64 + 1, (rb / cell).ceil() as i64 + 1);
    let ca = cells_of(a, cell, ha).occupied();
    let cb = cells_of(b, cell, hb).occupied();
    let mut sum = CellSet::new(ha + hb, cell);
    for &(ax, ay) in &ca {
        for &(bx, by) in &cb {
            sum.mark(ax + bx, ay + by);
        }
    }
    Ok(sum)
}

/// `A + B` by direct dilation on a `g`-cell raster, `g ≤ 160`. Returns the sum
/// and the cell width `2(ρ_out(A) + ρ_out(B)) / g`.
///
/// The radius on each grid ray is the exit point of the farthest occupied cell
/// the ray crosses.
pub fn naive_minkowski_sum(a: &StarBody2D, b: &StarBody2D, g: usize) -> Result<(StarBody2D, f64)> {
    let sum = dilate(a, b, g)?;
    let occupied = sum.occupied();
    let m = a.m();
    let radii = (0..m)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / m as f64;
            let v = [theta.cos(), theta.sin()];
            occupied
                .iter()
                .filter_map(|&(ix, iy)| {
                    let (lo, hi) = cell_box(ix, iy, sum.cell);
                    clip([0.0, 0.0], v, lo, hi, 0.0, f64::INFINITY).map(|(_, t1)| t1)
                })
                .fold(0.0, f64::max)
        })
        .collect();
    Ok((StarBody2D::new(radii)?, sum.cell))
}

/// Occupied cells of the naive sum, for symmetry checks.
pub fn naive_sum_cells(a: &StarBody2D, b: &StarBody2D, g: usize) -> Result<Vec<(i64, i64)>> {
    Ok(dilate(a, b, g)?.occupied())
}

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    h / 3.0 * (f(a) + inner + f(b))
}

/// `M^*([0, u]) = E|x₁| / 2` over `S^{n−1}`.
///
/// With `x₁ = sin φ` the marginal becomes `cos^{n−2} φ` on `[−π/2, π/2]`, which is
/// smooth, so Simpson's rule reaches `1e−10` without special endpoint handling.
pub fn interval_mean_width(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(invalid(format!("dimension must be at least 2, got {n}")));
    }
    let p = (n - 2) as i32;
    let intervals = 20_000;
    let num = simpson(|phi| phi.sin() * phi.cos().powi(p), 0.0, PI / 2.0, intervals);
    let den = simpson(|phi| phi.cos().powi(p), 0.0, PI / 2.0, intervals);
    Ok(0.5 * num / den)
}

/// Monte Carlo mean width: average support over uniform random directions.
/// Returns the estimate and its standard error.
pub fn mc_mean_width<K: Support + ?Sized>(k: &K, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples < 1000 {
        return Err(invalid(format!("need at least 1000 samples, got {samples}")));
    }
    let mut stream = SeedStream::new(seed);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..samples {
        let d = random_direction(k.dim(), &mut stream)?;
        let h = k.support(&d)?;
        sum += h;
        sum_sq += h * h;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::geom::sphere_quadrature;
    use crate::star2d::generators::*;

    fn gamma_ratio(n: usize) -> f64 {
        // E|x₁| = Γ(n/2) / (√π Γ((n+1)/2)), by the recurrence E_n = E_{n−2} (n−2)/(n−1).
        let mut e = if n % 2 == 0 { 2.0 / PI } else { 0.5 };
        let mut k = if n % 2 == 0 { 2 } else { 3 };
        while k < n {
            k += 2;
            e *= (k - 2) as f64 / (k - 1) as f64;
        }
        e
    }

    #[test]
    fn interval_mean_width_closed_forms() {
        assert!((interval_mean_width(2).unwrap() - 1.0 / PI).abs() < 1e-10);
        assert!((interval_mean_width(3).unwrap() - 0.25).abs() < 1e-10);
        assert!((interval_mean_width(4).unwrap() - 2.0 / (3.0 * PI)).abs() < 1e-10);
        assert!((interval_mean_width(5).unwrap() - 3.0 / 16.0).abs() < 1e-10);
        for n in 2..=40 {
            assert!((interval_mean_width(n).unwrap() - 0.5 * gamma_ratio(n)).abs() < 1e-10, "n = {n}");
        }
        assert!(interval_mean_width(1).is_err());
    }

    #[test]
    fn interval_mean_width_decreases_towards_the_gaussian_rate() {
        let mut prev = f64::INFINITY;
        let mut prev_gap = f64::INFINITY;
        for n in 2..=16 {
            let w = interval_mean_width(n).unwrap();
            assert!(w < prev);
            prev = w;
            let gap = ((2.0 * PI * n as f64).sqrt() * w - 1.0).abs();
            if n >= 3 {
                assert!(gap < 0.2, "n = {n}: {gap}");
                assert!(gap < prev_gap);
            }
            prev_gap = gap;
        }
    }

    #[test]
    fn naive_disc_sum_and_identity() {
        let (s, cell) = naive_minkowski_sum(&gen_disc(720, 1.0).unwrap(), &gen_disc(720, 0.5).unwrap(), 128).unwrap();
        assert!(s.radial_distance(1.5) <= 2.0 * cell, "{}", s.radial_distance(1.5));
        let k = gen_random_star(3, 720, 0.9, 1.0).unwrap();
        let zero = StarBody2D::new(vec![0.0; 720]).unwrap();
        let (s, cell) = naive_minkowski_sum(&k, &zero, 128).unwrap();
        let err = k.radii().iter().zip(s.radii()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= cell, "{err} vs {cell}");
    }

    #[test]
    fn naive_sum_guards_its_size() {
        let d = gen_disc(720, 1.0).unwrap();
        assert!(matches!(naive_minkowski_sum(&d, &d, 256), Err(Error::ResolutionTooLarge { .. })));
    }

    #[test]
    fn naive_sum_is_symmetric() {
        let a = gen_random_spiky(1, 720, 12, (0.1, 0.3), (0.6, 1.0)).unwrap();
        let b = gen_random_star(2, 720, 0.2, 1.0).unwrap();
        assert_eq!(naive_sum_cells(&a, &b, 64).unwrap(), naive_sum_cells(&b, &a, 64).unwrap());
    }

    #[test]
    fn mc_examples() {
        let ball = SupportBody::ball(Arc::new(sphere_quadrature(3, 512).unwrap()), 1.0).unwrap();
        let (est, se) = mc_mean_width(&ball, 2000, 1).unwrap();
        assert_eq!((est, se), (1.0, 0.0));
        let seg = IntervalBody::new(1.0, Direction::axis(2, 0).unwrap()).unwrap();
        let (est, se) = mc_mean_width(&seg, 1_000_000, 2).unwrap();
        assert!((est - 1.0 / PI).abs() <= 3.0 * se, "{est} ± {se}");
        assert!(mc_mean_width(&seg, 10, 2).is_err());
    }

    #[test]
    fn mc_agrees_with_quadrature_on_random_stars() {
        for seed in 0..5 {
            let k = gen_random_star(seed, 720, 0.2, 1.0).unwrap();
            let cloud = PointCloud::from_star(&k, 4).unwrap();
            assert!(cloud.inside(&k));
            let (est, se) = mc_mean_width(&cloud, 20_000, seed).unwrap();
            assert!((est - k.mean_width()).abs() <= 3.0 * se + 1e-4, "{est} ± {se} vs {}", k.mean_width());
        }
    }
}
