//! Direction strategies and stopping rules.

use std::collections::HashSet;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::geom::{random_direction, Direction, SeedStream};
use crate::pipeline::StepRecord;
use crate::star2d::GridAngle;

/// How directions are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyKind {
    /// Uniform on `S^{n−1}`.
    UniformRandom { seed: u64 },
    /// Uniform over the `m` grid angles.
    GridRandom2D { seed: u64, m: usize },
    FixedList(Vec<Direction>),
    /// Grid angles in van der Corput order; each new angle splits the largest gap.
    HalvingAngles2D { m: usize },
}

/// A stateful direction source for one run.
#[derive(Debug, Clone)]
pub struct Strategy {
    kind: StrategyKind,
    n: usize,
    stream: Option<SeedStream>,
    pos: usize,
    seen: HashSet<usize>,
}

fn van_der_corput(mut k: u64) -> f64 {
    let (mut v, mut denom) = (0.0, 1.0);
    while k > 0 {
        denom *= 2.0;
        v += (k & 1) as f64 / denom;
        k >>= 1;
    }
    v
}

impl Strategy {
    pub fn new(kind: StrategyKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("dimension must be at least 2, got {n}")));
        }
        if let StrategyKind::GridRandom2D { m, .. } | StrategyKind::HalvingAngles2D { m } = &kind {
            if n != 2 || *m == 0 {
                return Err(invalid(format!("grid strategies need n = 2 and m > 0, got n = {n}, m = {m}")));
            }
        }
        let stream = match &kind {
            StrategyKind::UniformRandom { seed } => Some(SeedStream::new(*seed)),
            StrategyKind::GridRandom2D { seed, .. } => Some(SeedStream::new(*seed)),
            StrategyKind::FixedList(dirs) => {
                if let Some(d) = dirs.iter().find(|d| d.dim() != n) {
                    return Err(Error::DimensionMismatch { expected: n, found: d.dim() });
                }
                None
            }
            StrategyKind::HalvingAngles2D { .. } => None,
        };
        Ok(Self { kind, n, stream, pos: 0, seen: HashSet::new() })
    }

    pub fn uniform_random(n: usize, seed: u64) -> Result<Self> {
        Self::new(StrategyKind::UniformRandom { seed }, n)
    }

    pub fn grid_random(seed: u64, m: usize) -> Result<Self> {
        Self::new(StrategyKind::GridRandom2D { seed, m }, 2)
    }

    pub fn fixed_list(dirs: Vec<Direction>) -> Result<Self> {
        let n = dirs.first().map_or(2, Direction::dim);
        Self::new(StrategyKind::FixedList(dirs), n)
    }

    pub fn halving_angles(m: usize) -> Result<Self> {
        Self::new(StrategyKind::HalvingAngles2D { m }, 2)
    }

    pub fn kind(&self) -> &StrategyKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of directions emitted so far.
    pub fn position(&self) -> usize {
        self.pos
    }

    fn next_halving(&mut self, m: usize) -> usize {
        if self.seen.len() == m {
            self.seen.clear();
        }
        let mut k = self.seen.len() as u64;
        // Enough draws always exist: every index is floor(vdc(j) m) for some j < 2m.
        loop {
            let idx = ((van_der_corput(k) * m as f64).floor() as usize).min(m - 1);
            k += 1;
            if self.seen.insert(idx) {
                return idx;
            }
        }
    }

    /// The next grid angle; only grid strategies and grid-aligned lists qualify.
    pub fn next_grid_angle(&mut self, m: usize) -> Result<GridAngle> {
        let a = match self.kind.clone() {
            StrategyKind::GridRandom2D { m: sm, .. } | StrategyKind::HalvingAngles2D { m: sm } if sm != m => {
                return Err(Error::GridMismatch { body: m, angle: sm });
            }
            StrategyKind::GridRandom2D { .. } => {
                let rng = self.stream.as_mut().expect("seeded strategy").rng();
                GridAngle::new(rng.random_range(0..m), m)?
            }
            StrategyKind::HalvingAngles2D { .. } => GridAngle::new(self.next_halving(m), m)?,
            StrategyKind::FixedList(dirs) => {
                let d = dirs.get(self.pos).ok_or(Error::StrategyExhausted(dirs.len()))?;
                GridAngle::from_direction(d, m)?
            }
            StrategyKind::UniformRandom { .. } => {
                let d = self.next_direction()?;
                return GridAngle::from_direction(&d, m);
            }
        };
        self.pos += 1;
        Ok(a)
    }

    /// The next direction in `S^{n−1}`.
    pub fn next_direction(&mut self) -> Result<Direction> {
        let d = match self.kind.clone() {
            StrategyKind::UniformRandom { .. } => {
                random_direction(self.n, self.stream.as_mut().expect("seeded strategy"))?
            }
            StrategyKind::GridRandom2D { m, .. } | StrategyKind::HalvingAngles2D { m } => {
                return self.next_grid_angle(m).map(|a| a.direction());
            }
            StrategyKind::FixedList(dirs) => dirs.get(self.pos).cloned().ok_or(Error::StrategyExhausted(dirs.len()))?,
        };
        self.pos += 1;
        Ok(d)
    }
}

/// Predicate over the latest step record.
#[derive(Debug, Clone, PartialEq)]
pub enum StopRule {
    InnerRadiusAtLeast(f64),
    /// `(1 − ε) M ≤ ρ_in` and `ρ_out ≤ (1 + ε) M` with `M` the record's mean width.
    SandwichWithin(f64),
    MaxSteps(usize),
    And(Box<StopRule>, Box<StopRule>),
    Or(Box<StopRule>, Box<StopRule>),
}

impl StopRule {
    pub fn and(self, other: StopRule) -> Self {
        Self::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: StopRule) -> Self {
        Self::Or(Box::new(self), Box::new(other))
    }

    /// Whether every evaluation path is cut off by a step bound.
    pub fn terminates(&self) -> bool {
        match self {
            Self::MaxSteps(_) => true,
            Self::InnerRadiusAtLeast(_) | Self::SandwichWithin(_) => false,
            Self::And(a, b) => a.terminates() && b.terminates(),
            Self::Or(a, b) => a.terminates() || b.terminates(),
        }
    }

    /// Errors unless [`terminates`](Self::terminates).
    pub fn validate(&self) -> Result<()> {
        if self.terminates() {
            Ok(())
        } else {
            Err(invalid("stop rule has no MaxSteps bound on some branch"))
        }
    }

    pub fn should_stop(&self, rec: &StepRecord) -> bool {
        match self {
            Self::InnerRadiusAtLeast(rho) => rec.rho_in >= *rho,
            Self::SandwichWithin(eps) => {
                rec.rho_in >= (1.0 - eps) * rec.mean_width && rec.rho_out <= (1.0 + eps) * rec.mean_width
            }
            Self::MaxSteps(n) => rec.step >= *n,
            Self::And(a, b) => a.should_stop(rec) && b.should_stop(rec),
            Self::Or(a, b) => a.should_stop(rec) || b.should_stop(rec),
        }
    }
}
