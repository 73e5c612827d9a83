//! Test-corpus bodies on an `m`-angle grid.

use std::f64::consts::PI;

use rand::Rng;

use super::StarBody2D;
use crate::error::{invalid, Result};
use crate::geom::SeedStream;

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// The disc of radius `rho`.
pub fn gen_disc(m: usize, rho: f64) -> Result<StarBody2D> {
    positive("rho", rho)?;
    StarBody2D::new(vec![rho; m])
}

/// The segment `[0, R e(2πk/m)]`.
pub fn gen_segment(m: usize, len: f64, k: usize) -> Result<StarBody2D> {
    positive("R", len)?;
    if k >= m {
        return Err(invalid(format!("segment angle index {k} outside grid of size {m}")));
    }
    let mut r = vec![0.0; m];
    r[k] = len;
    StarBody2D::new(r)
}

/// A disc of radius `base` with `spikes` equally spaced rays of length `len`.
pub fn gen_spiky(m: usize, spikes: usize, len: f64, base: f64) -> Result<StarBody2D> {
    positive("len", len)?;
    if !(base.is_finite() && base >= 0.0) {
        return Err(invalid(format!("base must be nonnegative, got {base}")));
    }
    if spikes == 0 || spikes > m {
        return Err(invalid(format!("spike count {spikes} must lie in 1..={m}")));
    }
    let mut r = vec![base; m];
    for j in 0..spikes {
        r[j * m / spikes] = len;
    }
    StarBody2D::new(r)
}

/// Plus-shaped union of two centered bars of half-length `arm` and full width `width`.
pub fn gen_cross(m: usize, arm: f64, width: f64) -> Result<StarBody2D> {
    positive("arm", arm)?;
    positive("width", width)?;
    if width > 2.0 * arm {
        return Err(invalid("cross width exceeds its arm span"));
    }
    let exit = |along: f64, across: f64| -> f64 {
        let t_along = if along.abs() > 1e-15 { arm / along.abs() } else { f64::INFINITY };
        let t_across = if across.abs() > 1e-15 { 0.5 * width / across.abs() } else { f64::INFINITY };
        t_along.min(t_across)
    };
    let r = (0..m)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / m as f64;
            let (c, s) = (theta.cos(), theta.sin());
            exit(c, s).max(exit(s, c))
        })
        .collect();
    StarBody2D::new(r)
}

/// Number of knots used by [`gen_random_star`].
pub const RANDOM_STAR_KNOTS: usize = 24;

/// Random star: i.i.d. knot values in `[lo, hi]` at equally spaced angles,
/// joined by periodic linear interpolation so features stay wider than the grid.
pub fn gen_random_star(seed: u64, m: usize, lo: f64, hi: f64) -> Result<StarBody2D> {
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi && hi > 0.0) {
        return Err(invalid(format!("random star bounds [{lo}, {hi}] are invalid")));
    }
    let mut stream = SeedStream::new(seed);
    let knots: Vec<f64> = (0..RANDOM_STAR_KNOTS).map(|_| stream.rng().random_range(lo..=hi)).collect();
    let r = (0..m)
        .map(|i| {
            let t = i as f64 * RANDOM_STAR_KNOTS as f64 / m as f64;
            let j = t.floor() as usize % RANDOM_STAR_KNOTS;
            let f = t - t.floor();
            knots[j] * (1.0 - f) + knots[(j + 1) % RANDOM_STAR_KNOTS] * f
        })
        .collect();
    StarBody2D::new(r)
}

/// Random spiky star: a random smooth base in `[base_lo, base_hi]` with
/// `spikes` rays at distinct random grid angles, lengths in `[len_lo, len_hi]`.
pub fn gen_random_spiky(
    seed: u64,
    m: usize,
    spikes: usize,
    (base_lo, base_hi): (f64, f64),
    (len_lo, len_hi): (f64, f64),
) -> Result<StarBody2D> {
    if spikes == 0 || spikes > m {
        return Err(invalid(format!("spike count {spikes} must lie in 1..={m}")));
    }
    if !(len_lo > 0.0 && len_lo <= len_hi && len_hi.is_finite()) {
        return Err(invalid("spike length bounds are invalid"));
    }
    let base = gen_random_star(seed ^ 0x9E37_79B9_7F4A_7C15, m, base_lo, base_hi)?;
    let mut r = base.radii().to_vec();
    let mut stream = SeedStream::new(seed);
    let mut placed = 0;
    while placed < spikes {
        let k = stream.rng().random_range(0..m);
        let len = stream.rng().random_range(len_lo..=len_hi);
        if len > r[k] {
            r[k] = len;
            placed += 1;
        }
    }
    StarBody2D::new(r)
}

/// Angular max filter: `r'[i] = max r[i−w..=i+w]`. Turns one-ray spikes
/// into plateaus `2w + 1` grid angles wide.
pub fn blunted(k: &StarBody2D, w: usize) -> Result<StarBody2D> {
    let (r, m) = (k.radii(), k.m());
    if 2 * w + 1 > m {
        return Err(invalid(format!("filter half-width {w} exceeds the grid")));
    }
    let out = (0..m).map(|i| (0..=2 * w).map(|d| r[(i + m + d - w) % m]).fold(0.0, f64::max)).collect();
    StarBody2D::new(out)
}

/// Random star whose hull is sandwiched, `(1 − ε)D ⊆ conv K ⊆ (1 + ε)D`,
/// while `K` itself is far from round: a low random base plus spikes of
/// length in `[1 − ε/2, 1 + ε]` spaced at most as far apart as the hull allows.
pub fn gen_sandwiched(seed: u64, m: usize, eps: f64) -> Result<StarBody2D> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(invalid(format!("sandwich accuracy must lie in (0, 1/2), got {eps}")));
    }
    let lo = 1.0 - 0.5 * eps;
    let max_gap = 2.0 * ((1.0 - eps) / lo).acos();
    let max_steps = ((max_gap * m as f64 / (2.0 * PI)).floor() as usize).max(1);
    let mut stream = SeedStream::new(seed);
    loop {
        let base = stream.rng().random_range(0.0..0.6) * (1.0 - eps);
        let mut r = vec![base; m];
        let start = stream.rng().random_range(0..m);
        let mut k = 0;
        while k < m {
            r[(start + k) % m] = stream.rng().random_range(lo..=1.0 + eps);
            k += stream.rng().random_range(1..=max_steps);
        }
        let body = StarBody2D::new(r)?;
        let (inner, outer) = body.hull_radii();
        if inner >= 1.0 - eps && outer <= 1.0 + eps {
            return Ok(body);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_and_segment() {
        assert!(gen_disc(720, 1.0).unwrap().radii().iter().all(|&r| r == 1.0));
        let s = gen_segment(720, 1.0, 0).unwrap();
        assert_eq!(s.radii()[0], 1.0);
        assert!(s.radii()[1..].iter().all(|&r| r == 0.0));
        assert!(gen_disc(720, 0.0).is_err());
        assert!(gen_segment(720, 1.0, 720).is_err());
    }

    #[test]
    fn spiky_has_exactly_the_requested_spikes() {
        let k = gen_spiky(720, 12, 1.0, 0.2).unwrap();
        assert_eq!(k.radii().iter().filter(|&&r| r == 1.0).count(), 12);
        assert_eq!(k.inner_radius(), 0.2);
        assert_eq!(k.outer_radius(), 1.0);
        assert!(gen_spiky(720, 0, 1.0, 0.2).is_err());
    }

    #[test]
    fn cross_radii() {
        let k = gen_cross(720, 1.0, 0.1).unwrap();
        // Outer radius sits between the arm tip and the bar corner.
        assert!(k.outer_radius() >= 1.0 && k.outer_radius() <= (1.0f64 + 0.05 * 0.05).sqrt());
        // Narrowest at 45°, where both bars exit at (w/2)·√2.
        assert!((k.inner_radius() - 0.05 * 2f64.sqrt()).abs() < 1e-12);
        assert!((k.radii()[180] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_star_is_reproducible_and_bounded() {
        let a = gen_random_star(5, 720, 0.2, 1.0).unwrap();
        let b = gen_random_star(5, 720, 0.2, 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.radii().iter().all(|&r| (0.2..=1.0).contains(&r)));
        assert_ne!(a, gen_random_star(6, 720, 0.2, 1.0).unwrap());
    }

    #[test]
    fn random_spiky_places_all_spikes() {
        let k = gen_random_spiky(3, 720, 12, (0.1, 0.3), (0.6, 1.0)).unwrap();
        assert_eq!(k.radii().iter().filter(|&&r| r >= 0.6).count(), 12);
    }

    #[test]
    fn blunting_widens_spikes() {
        let k = gen_spiky(720, 12, 1.0, 0.2).unwrap();
        let b = blunted(&k, 1).unwrap();
        assert_eq!(b.radii().iter().filter(|&&r| r == 1.0).count(), 36);
        assert_eq!(blunted(&k, 0).unwrap(), k);
    }

    #[test]
    fn sandwiched_hull() {
        for seed in 0..5 {
            let k = gen_sandwiched(seed, 720, 0.01).unwrap();
            let (inner, outer) = k.hull_radii();
            assert!(inner >= 0.99 && outer <= 1.01);
            assert!(k.inner_radius() < 0.6);
        }
    }
}
