//! Points, unit directions, hyperplane reflections and spherical sampling.

use std::f64::consts::PI;
use std::sync::OnceLock;

use kdtree::distance::squared_euclidean;
use kdtree::KdTree;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};

/// Tolerance on `| ‖u‖ − 1 |` for a [`Direction`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A point of `R^n`, `n ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(invalid(format!("points need n >= 2 coordinates, got {}", coords.len())));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("point coordinates must be finite"));
        }
        Ok(Self(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }
}

/// A point of the unit sphere `S^{n-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalizes `coords`; fails on zero, non-finite, or 1-dimensional input.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(invalid(format!("directions need n >= 2 coordinates, got {}", coords.len())));
        }
        let len = norm(&coords);
        if !len.is_finite() || len == 0.0 {
            return Err(invalid("direction must have finite nonzero length"));
        }
        Ok(Self(coords.into_iter().map(|c| c / len).collect()))
    }

    /// The planar direction `e(θ) = (cos θ, sin θ)`.
    pub fn from_angle(theta: f64) -> Self {
        Self(vec![theta.cos(), theta.sin()])
    }

    /// The `i`-th standard basis vector of `R^n`.
    pub fn axis(n: usize, i: usize) -> Result<Self> {
        if n < 2 || i >= n {
            return Err(invalid(format!("axis {i} does not exist in dimension {n}")));
        }
        let mut c = vec![0.0; n];
        c[i] = 1.0;
        Ok(Self(c))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Polar angle in `[0, 2π)` of the first two coordinates.
    pub fn angle(&self) -> f64 {
        self.0[1].atan2(self.0[0]).rem_euclid(2.0 * PI)
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    /// `R_u d` for `u = self`, again a direction.
    pub fn reflect_dir(&self, d: &Direction) -> Result<Direction> {
        check_dims(self.dim(), d.dim())?;
        Ok(Direction(reflect_coords(&d.0, &self.0)))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn reflect_coords(x: &[f64], u: &[f64]) -> Vec<f64> {
    let s = 2.0 * dot(x, u);
    x.iter().zip(u).map(|(xi, ui)| xi - s * ui).collect()
}

/// Reflection through the hyperplane `u^⊥`: `x − 2⟨x,u⟩u`.
pub fn reflect(x: &Point, u: &Direction) -> Result<Point> {
    check_dims(u.dim(), x.dim())?;
    Ok(Point(reflect_coords(&x.0, &u.0)))
}

/// Seedable source of random directions. Replays are bit-identical for equal seeds.
#[derive(Debug, Clone)]
pub struct SeedStream {
    rng: ChaCha8Rng,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Uniform direction on `S^{n-1}` from a normalized standard Gaussian vector.
pub fn random_direction(n: usize, stream: &mut SeedStream) -> Result<Direction> {
    if n < 2 {
        return Err(invalid(format!("random directions need n >= 2, got {n}")));
    }
    loop {
        let g: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut stream.rng)).collect();
        // A zero draw has probability zero but would not normalize.
        if norm(&g) > 1e-300 {
            return Direction::new(g);
        }
    }
}

/// How the nodes of a [`SphereQuadrature`] were laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudKind {
    /// `n = 2`: the `m` angles `2πi/m`.
    Grid { m: usize },
    /// `n = 3`: golden-angle spiral.
    Fibonacci { m: usize },
    /// `n ≥ 4` (or on request): normalized Gaussians from a fixed seed.
    Random { n: usize, m: usize, seed: u64 },
}

/// Smallest accepted node count.
pub const MIN_NODES: usize = 4;

/// Seed used for random clouds when none is given.
pub const DEFAULT_CLOUD_SEED: u64 = 0x5EED_C10D;

/// Equal-weight cloud sizes used when the caller has no preference.
pub fn default_cloud_size(n: usize) -> usize {
    match n {
        2 => 720,
        3 => 2048,
        _ => 4096 * n,
    }
}

/// Equal-weight nodes on `S^{n-1}` approximating the normalized Haar measure.
pub struct SphereQuadrature {
    n: usize,
    kind: CloudKind,
    nodes: Vec<Direction>,
    weights: Vec<f64>,
    index: OnceLock<KdTree<f64, usize, Vec<f64>>>,
}

impl std::fmt::Debug for SphereQuadrature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphereQuadrature")
            .field("n", &self.n)
            .field("kind", &self.kind)
            .field("len", &self.nodes.len())
            .finish()
    }
}

impl Clone for SphereQuadrature {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            kind: self.kind,
            nodes: self.nodes.clone(),
            weights: self.weights.clone(),
            index: OnceLock::new(),
        }
    }
}

impl PartialEq for SphereQuadrature {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n
    }
}

/// Builds the default quadrature: uniform grid for `n = 2`, Fibonacci spiral
/// for `n = 3`, seeded Monte Carlo above.
pub fn sphere_quadrature(n: usize, m: usize) -> Result<SphereQuadrature> {
    if n < 2 {
        return Err(invalid(format!("quadrature needs n >= 2, got {n}")));
    }
    if m < MIN_NODES {
        return Err(invalid(format!("quadrature needs at least {MIN_NODES} nodes, got {m}")));
    }
    let kind = match n {
        2 => CloudKind::Grid { m },
        3 => CloudKind::Fibonacci { m },
        _ => CloudKind::Random { n, m, seed: DEFAULT_CLOUD_SEED },
    };
    SphereQuadrature::from_kind(kind)
}

impl SphereQuadrature {
    pub fn from_kind(kind: CloudKind) -> Result<Self> {
        let (n, nodes) = match kind {
            CloudKind::Grid { m } => {
                if m < MIN_NODES {
                    return Err(invalid("grid quadrature needs m >= 4"));
                }
                let nodes = (0..m).map(|i| Direction::from_angle(2.0 * PI * i as f64 / m as f64)).collect();
                (2, nodes)
            }
            CloudKind::Fibonacci { m } => {
                if m < MIN_NODES {
                    return Err(invalid("fibonacci quadrature needs m >= 4"));
                }
                let golden = PI * (3.0 - 5f64.sqrt());
                let nodes = (0..m)
                    .map(|i| {
                        let z = 1.0 - (2 * i + 1) as f64 / m as f64;
                        let rho = (1.0 - z * z).max(0.0).sqrt();
                        let phi = golden * i as f64;
                        Direction::new(vec![rho * phi.cos(), rho * phi.sin(), z])
                    })
                    .collect::<Result<Vec<_>>>()?;
                (3, nodes)
            }
            CloudKind::Random { n, m, seed } => {
                if m < MIN_NODES {
                    return Err(invalid("random quadrature needs m >= 4"));
                }
                let mut stream = SeedStream::new(seed);
                let nodes = (0..m)
                    .map(|_| random_direction(n, &mut stream))
                    .collect::<Result<Vec<_>>>()?;
                (n, nodes)
            }
        };
        let w = 1.0 / nodes.len() as f64;
        let weights = vec![w; nodes.len()];
        Ok(Self { n, kind, nodes, weights, index: OnceLock::new() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> CloudKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Direction] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ w_i f(node_i)`.
    pub fn integrate(&self, mut f: impl FnMut(&Direction) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(d, w)| w * f(d)).sum()
    }

    /// Weighted sum of precomputed node values.
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Grid size when this is the planar uniform grid.
    pub fn grid_size(&self) -> Option<usize> {
        match self.kind {
            CloudKind::Grid { m } => Some(m),
            _ => None,
        }
    }

    /// The `k` nodes nearest to `x` (Euclidean chord distance, which orders
    /// like geodesic distance on the sphere), as `(index, geodesic angle)`.
    pub fn nearest(&self, x: &[f64], k: usize) -> Vec<(usize, f64)> {
        let tree = self.index.get_or_init(|| {
            let mut tree = KdTree::with_capacity(self.n, 16);
            for (i, d) in self.nodes.iter().enumerate() {
                tree.add(d.coords().to_vec(), i).expect("finite unit node");
            }
            tree
        });
        tree.nearest(x, k, &squared_euclidean)
            .expect("finite query point")
            .into_iter()
            .map(|(d2, &i)| {
                let chord = d2.sqrt().min(2.0);
                (i, 2.0 * (chord / 2.0).asin())
            })
            .collect()
    }
}
