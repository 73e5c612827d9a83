//! Occupancy rasters of planar star bodies and their Minkowski sums by
//! FFT-based indicator convolution.

use std::cell::RefCell;
use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::StarBody2D;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Square occupancy grid centered on the origin.
///
/// Cell `(ix, iy)` with `-half <= ix, iy <= half` is the square of side
/// `cell` centered at `(ix * cell, iy * cell)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    half: usize,
    cell: f64,
    occ: Vec<bool>,
}

impl Raster {
    pub fn empty(half: usize, cell: f64) -> Self {
        let side = 2 * half + 1;
        Self { half, cell, occ: vec![false; side * side] }
    }

    /// Marks every cell whose center lies in the body, every cell whose center
    /// sits on a grid ray `[0, r_i e(θ_i)]`, and the origin cell.
    ///
    /// The ray pass keeps spikes thinner than a cell from vanishing.
    pub fn rasterize(body: &StarBody2D, cell: f64, half: usize) -> Self {
        let mut raster = Self::empty(half, cell);
        let (inner, outer) = (body.inner_radius(), body.outer_radius());
        let (inner2, outer2) = (inner * inner, outer * outer);
        let h = half as isize;
        for iy in -h..=h {
            let y = iy as f64 * cell;
            for ix in -h..=h {
                let x = ix as f64 * cell;
                let d2 = x * x + y * y;
                let inside = if d2 <= inner2 {
                    true
                } else if d2 > outer2 {
                    false
                } else {
                    d2.sqrt() <= body.radial_eval(y.atan2(x))
                };
                if inside {
                    raster.set(ix, iy);
                }
            }
        }
        raster.set(0, 0);

        let m = body.m();
        let step = cell / 4.0;
        for (i, &r) in body.radii().iter().enumerate() {
            if r <= 0.0 {
                continue;
            }
            let theta = 2.0 * PI * i as f64 / m as f64;
            let (c, s) = (theta.cos(), theta.sin());
            let samples = (r / step).ceil() as usize;
            for k in 0..=samples {
                let t = (k as f64 * step).min(r);
                let (ix, iy) = ((t * c / cell).round() as isize, (t * s / cell).round() as isize);
                let proj = (ix as f64 * c + iy as f64 * s) * cell;
                if proj <= r + 1e-12 * cell {
                    raster.set(ix, iy);
                }
            }
        }
        raster
    }

    /// Image under `x ↦ −x`.
    pub fn mirrored_x(&self) -> Self {
        let side = self.side();
        let mut occ = self.occ.clone();
        for row in occ.chunks_mut(side) {
            row.reverse();
        }
        Self { half: self.half, cell: self.cell, occ }
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn side(&self) -> usize {
        2 * self.half + 1
    }

    pub fn cell(&self) -> f64 {
        self.cell
    }

    pub fn occupied_count(&self) -> usize {
        self.occ.iter().filter(|&&o| o).count()
    }

    fn index(&self, ix: isize, iy: isize) -> Option<usize> {
        let h = self.half as isize;
        if ix < -h || ix > h || iy < -h || iy > h {
            return None;
        }
        Some(((iy + h) as usize) * self.side() + (ix + h) as usize)
    }

    fn set(&mut self, ix: isize, iy: isize) {
        if let Some(k) = self.index(ix, iy) {
            self.occ[k] = true;
        }
    }

    pub fn is_occupied(&self, ix: isize, iy: isize) -> bool {
        self.index(ix, iy).is_some_and(|k| self.occ[k])
    }

    /// Occupancy of the cell containing the point `(x, y)`.
    pub fn covers(&self, x: f64, y: f64) -> bool {
        self.is_occupied((x / self.cell).round() as isize, (y / self.cell).round() as isize)
    }

    /// Radial function of the union of occupied cells on an `m`-angle grid:
    /// along each ray, the exit point of the farthest occupied cell.
    pub fn radial_extract(&self, m: usize) -> Vec<f64> {
        let step = self.cell / 4.0;
        let t_max = (self.half as f64 + 0.5) * self.cell * std::f64::consts::SQRT_2;
        let n_steps = (t_max / step).ceil() as usize;
        (0..m)
            .map(|i| {
                let theta = 2.0 * PI * i as f64 / m as f64;
                let (c, s) = (theta.cos(), theta.sin());
                let hit = |t: f64| self.covers(t * c, t * s);
                for k in (0..=n_steps).rev() {
                    let t = k as f64 * step;
                    if hit(t) {
                        // The sample above was empty: bisect for the exit point.
                        let (mut lo, mut hi) = (t, t + step);
                        for _ in 0..20 {
                            let mid = 0.5 * (lo + hi);
                            if hit(mid) {
                                lo = mid;
                            } else {
                                hi = mid;
                            }
                        }
                        return lo;
                    }
                }
                0.0
            })
            .collect()
    }
}

fn transpose_square(buf: &mut [Complex64], g: usize) {
    const BLOCK: usize = 32;
    for bi in (0..g).step_by(BLOCK) {
        for bj in (bi..g).step_by(BLOCK) {
            for i in bi..(bi + BLOCK).min(g) {
                let j0 = if bi == bj { i + 1 } else { bj };
                for j in j0..(bj + BLOCK).min(g) {
                    buf.swap(i * g + j, j * g + i);
                }
            }
        }
    }
}

/// Row transform, transpose, row transform. Applied to a spectrum in the
/// transposed layout with `inverse = true` it restores the original layout.
fn fft2(buf: &mut [Complex64], g: usize, inverse: bool) {
    let fft = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(g)
        } else {
            p.plan_fft_forward(g)
        }
    });
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(buf, &mut scratch);
    transpose_square(buf, g);
    fft.process_with_scratch(buf, &mut scratch);
}

/// Occupancy of `A + B` on a raster with the same cell size, where a cell is
/// occupied when the indicator convolution exceeds half a cell's mass.
///
/// Both rasters are packed into one complex field (`a + i b`), so a single
/// forward and a single inverse `g × g` transform are needed. Requires
/// `2 (half_a + half_b) + 1 <= g` so that the cyclic convolution does not wrap.
pub(crate) fn convolve(a: &Raster, b: &Raster, g: usize) -> Raster {
    let half = a.half + b.half;
    assert!(2 * half < g, "raster of half-width {half} does not fit an FFT of size {g}");
    assert!(g.is_power_of_two());
    let wrap = |i: isize| i.rem_euclid(g as isize) as usize;

    let mut buf = vec![Complex64::new(0.0, 0.0); g * g];
    for (raster, is_b) in [(a, false), (b, true)] {
        let h = raster.half as isize;
        for iy in -h..=h {
            for ix in -h..=h {
                if raster.is_occupied(ix, iy) {
                    let z = &mut buf[wrap(iy) * g + wrap(ix)];
                    if is_b {
                        z.im = 1.0;
                    } else {
                        z.re = 1.0;
                    }
                }
            }
        }
    }

    fft2(&mut buf, g, false);

    // Split Z = FA + i FB with FA(k) = (Z(k) + conj Z(-k)) / 2 and
    // FB(k) = (Z(k) - conj Z(-k)) / 2i, then store FA(k) FB(k) at k and -k.
    let neg = |p: usize| (g - p) % g;
    for p in 0..g {
        for q in 0..g {
            let (np, nq) = (neg(p), neg(q));
            let k = p * g + q;
            let nk = np * g + nq;
            if nk < k {
                continue;
            }
            let z = buf[k];
            let zn = buf[nk].conj();
            let fa = (z + zn) * 0.5;
            let fb = (z - zn) * Complex64::new(0.0, -0.5);
            let prod = fa * fb;
            buf[k] = prod;
            buf[nk] = prod.conj();
        }
    }

    fft2(&mut buf, g, true);

    let norm = (g * g) as f64;
    let mut out = Raster::empty(half, a.cell);
    let h = half as isize;
    for iy in -h..=h {
        for ix in -h..=h {
            if buf[wrap(iy) * g + wrap(ix)].re / norm > 0.5 {
                out.set(ix, iy);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_roundtrip() {
        let g = 70;
        let mut buf: Vec<Complex64> = (0..g * g).map(|k| Complex64::new(k as f64, 0.0)).collect();
        transpose_square(&mut buf, g);
        assert_eq!(buf[3 * g + 5].re, (5 * g + 3) as f64);
        transpose_square(&mut buf, g);
        assert!(buf.iter().enumerate().all(|(k, z)| z.re == k as f64));
    }

    #[test]
    fn convolution_matches_direct_dilation() {
        let a_body = StarBody2D::new(vec![0.3, 0.1, 0.0, 0.2, 0.05, 0.0, 0.25, 0.1]).unwrap();
        let b_body = StarBody2D::new(vec![0.0, 0.2, 0.1, 0.0, 0.3, 0.0, 0.0, 0.15]).unwrap();
        let cell = 0.05;
        let a = Raster::rasterize(&a_body, cell, 7);
        let b = Raster::rasterize(&b_body, cell, 7);
        let sum = convolve(&a, &b, 32);
        let mut direct = Raster::empty(14, cell);
        for ay in -7..=7 {
            for ax in -7..=7 {
                if !a.is_occupied(ax, ay) {
                    continue;
                }
                for by in -7..=7 {
                    for bx in -7..=7 {
                        if b.is_occupied(bx, by) {
                            direct.set(ax + bx, ay + by);
                        }
                    }
                }
            }
        }
        assert_eq!(sum, direct);
    }

    #[test]
    fn point_body_rasterizes_to_origin_cell() {
        let zero = StarBody2D::new(vec![0.0; 16]).unwrap();
        let r = Raster::rasterize(&zero, 0.1, 5);
        assert_eq!(r.occupied_count(), 1);
        assert!(r.is_occupied(0, 0));
    }

    #[test]
    fn extraction_of_a_disc() {
        let disc = StarBody2D::new(vec![1.0; 64]).unwrap();
        let cell = 0.01;
        let r = Raster::rasterize(&disc, cell, 110);
        for v in r.radial_extract(64) {
            assert!((v - 1.0).abs() <= cell, "{v}");
        }
    }
}
