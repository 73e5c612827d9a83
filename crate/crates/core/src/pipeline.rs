//! The three-phase symmetrization driver.
//!
//! Starting from `K` rescaled to mean width 1:
//!
//! 1. symmetrize until `K` contains the ball of radius `c₂/√n`;
//! 2. symmetrize until `conv K` is sandwiched between `(1 ± ε') D`, which forces
//!    `K` to contain a `2√ε'`-net of `(1 − ε') S^{n−1}`;
//! 3. grow the inner ball, first geometrically up to `2√ε'` and then by
//!    halving the gap, until it reaches `1 − 4√ε'`.
//!
//! `ε' = min(ε²/16, ε/25)` so that `1 − 4√ε' ≥ 1 − ε`. Every step checks the
//! monotonicity and conservation laws and the per-step growth inequalities of
//! phase 3 against the raster tolerance τ; a violation aborts the run.
//!
//! The hull in phase 2 is tracked exactly as grid support values, since the
//! hull of a symmetral is the symmetral of the hull. The raster body follows the
//! same directions and is only ever compared against it up to τ.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error as ThisError;

use crate::error::{invalid, Error, Result};
use crate::geom::{Direction, SphereQuadrature};
use crate::schedule::{StopRule, Strategy, StrategyKind};
use crate::star2d::{symmetral, GridAngle, StarBody2D};
use crate::support::{IntervalBody, SupportBody};

/// Largest accuracy for which the ball-growing steps are guaranteed.
pub const EPS0: f64 = 1.0 / 25.0;
/// Default seed-ball constant: phase 1 aims for `c₂/√n`.
pub const DEFAULT_C2: f64 = 0.2;
/// Default step cap for each phase.
pub const DEFAULT_PHASE_BUDGET: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Seed,
    Hull,
    GrowA,
    GrowB,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Self::Seed => "1",
            Self::Hull => "2",
            Self::GrowA => "3a",
            Self::GrowB => "3b",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Metrics after one step. Step 0 is the starting body and has no direction.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub phase: Phase,
    pub direction: Option<Direction>,
    pub rho_in: f64,
    pub rho_out: f64,
    pub mean_width: f64,
    /// Radial (or support) sup-distance to the unit ball.
    pub raddist: f64,
    /// Net containment at the internal accuracy, once that accuracy is in play.
    pub net: Option<bool>,
    pub tau: f64,
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(invalid(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

/// `q(ε) = (1 − ε) / (4√ε)`, the guaranteed growth factor below `2√ε`.
pub fn q_factor(eps: f64) -> Result<f64> {
    check_open_unit("eps", eps)?;
    Ok((1.0 - eps) / (4.0 * eps.sqrt()))
}

/// `min(ε²/16, ε/25)`, the accuracy the phases run at for a target `ε`.
pub fn internal_accuracy(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(invalid(format!("eps must lie in (0, 1/2), got {eps}")));
    }
    Ok((eps * eps / 16.0).min(eps / 25.0))
}

/// `⌈4 + 3 |ln(ε / r²)|⌉`.
pub fn case_a_budget(eps: f64, r: f64) -> Result<usize> {
    check_open_unit("eps", eps)?;
    check_open_unit("r", r)?;
    Ok((4.0 + 3.0 * (eps / (r * r)).ln().abs()).ceil() as usize)
}

/// `⌈|log₂ √ε|⌉`.
pub fn case_b_budget(eps: f64) -> Result<usize> {
    check_open_unit("eps", eps)?;
    Ok(eps.sqrt().log2().abs().ceil() as usize)
}

/// `(N_a, N_b)` under the ball-growing hypotheses `0 < ε < ε₀`, `0 < r < 1`.
pub fn budget_bounds(eps: f64, r: f64) -> Result<(usize, usize)> {
    if !(eps > 0.0 && eps < EPS0) {
        return Err(invalid(format!("eps must lie in (0, 1/25), got {eps}")));
    }
    Ok((case_a_budget(eps, r)?, case_b_budget(eps)?))
}

/// Accuracies and radius for the ball-growing phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaParams {
    pub eps: f64,
    pub eps_internal: f64,
    pub eps0: f64,
    /// Current inner radius.
    pub r: f64,
    pub n: usize,
}

impl LemmaParams {
    pub fn new(eps: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("dimension must be at least 2, got {n}")));
        }
        let eps_internal = internal_accuracy(eps)?;
        Ok(Self { eps, eps_internal, eps0: EPS0, r: 0.0, n })
    }

    /// Parameters for the ball-growing phase run directly at accuracy `eps`,
    /// without the rescaling from a user-facing target.
    pub fn growth(eps: f64, r: f64, n: usize) -> Result<Self> {
        if !(eps > 0.0 && eps < EPS0) {
            return Err(invalid(format!("eps must lie in (0, 1/25), got {eps}")));
        }
        if n < 2 {
            return Err(invalid(format!("dimension must be at least 2, got {n}")));
        }
        Ok(Self { eps, eps_internal: eps, eps0: EPS0, r, n })
    }

    pub fn with_radius(self, r: f64) -> Self {
        Self { r, ..self }
    }

    fn check_growth(&self) -> Result<()> {
        if !(self.eps_internal > 0.0 && self.eps_internal < self.eps0) {
            return Err(invalid(format!("internal accuracy {} is outside (0, 1/25)", self.eps_internal)));
        }
        if !(self.r > 0.0) {
            return Err(invalid(format!("inner radius must be positive, got {}", self.r)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub raster_g: usize,
    pub c2: f64,
    pub phase_budget: usize,
    /// Stop phase 1 on the inscribed interval's inner radius instead of the body's.
    pub via_interval: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            raster_g: crate::star2d::DEFAULT_RASTER_G,
            c2: DEFAULT_C2,
            phase_budget: DEFAULT_PHASE_BUDGET,
            via_interval: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub n: usize,
    pub eps: f64,
    pub eps_internal: f64,
    pub seed: Option<u64>,
    /// Mean width of the input; all radii are in units of it.
    pub m0: f64,
    pub n1: usize,
    pub n2: usize,
    pub n3a: usize,
    pub n3b: usize,
    pub budget_a: usize,
    pub budget_b: usize,
    pub final_rho_in: f64,
    pub final_rho_out: f64,
    /// Inner radius of the symmetrized inscribed interval after phase 1.
    pub interval_rho_in: Option<f64>,
    /// Exact hull sandwich radii after phase 2.
    pub hull_radii: Option<(f64, f64)>,
    pub records: Vec<StepRecord>,
    pub warnings: Vec<String>,
    pub wall_time: Duration,
    pub body: StarBody2D,
}

impl RunReport {
    pub fn total(&self) -> usize {
        self.n1 + self.n2 + self.n3a + self.n3b
    }

    /// Largest raster tolerance seen over the run.
    pub fn max_tau(&self) -> f64 {
        self.records.iter().map(|r| r.tau).fold(0.0, f64::max)
    }
}

/// A failed run with everything computed up to the failure.
#[derive(Debug, Clone, ThisError)]
#[error("{error}")]
pub struct RunFailure {
    pub error: Error,
    pub partial: Box<RunReport>,
}

fn seed_of(s: &Strategy) -> Option<u64> {
    match s.kind() {
        StrategyKind::UniformRandom { seed } | StrategyKind::GridRandom2D { seed, .. } => Some(*seed),
        _ => None,
    }
}

struct Driver<'a> {
    body: StarBody2D,
    mean_width: f64,
    strategy: &'a mut Strategy,
    cfg: &'a PipelineConfig,
    records: Vec<StepRecord>,
    net_eps: Option<f64>,
    net_held: bool,
    /// Mean width at the start of the phase and the τ accumulated since.
    phase_mean_width: f64,
    tau_sum: f64,
}

impl<'a> Driver<'a> {
    fn new(body: StarBody2D, strategy: &'a mut Strategy, cfg: &'a PipelineConfig) -> Self {
        let mean_width = body.mean_width();
        let mut d = Self {
            body,
            mean_width,
            strategy,
            cfg,
            records: Vec::new(),
            net_eps: None,
            net_held: false,
            phase_mean_width: mean_width,
            tau_sum: 0.0,
        };
        d.records.push(d.record(Phase::Seed, None, None, 0.0));
        d
    }

    fn steps(&self) -> usize {
        self.records.len() - 1
    }

    fn record(&self, phase: Phase, direction: Option<Direction>, net: Option<bool>, tau: f64) -> StepRecord {
        StepRecord {
            step: self.records.len(),
            phase,
            direction,
            rho_in: self.body.inner_radius(),
            rho_out: self.body.outer_radius(),
            mean_width: self.mean_width,
            raddist: self.body.radial_distance(1.0),
            net,
            tau,
        }
    }

    fn violation(&self, phase: Phase, detail: String) -> Error {
        Error::InvariantViolation { phase: phase.label().to_string(), step: self.steps(), detail }
    }

    fn budget(&self, phase: Phase, used: usize) -> Result<()> {
        if used >= self.cfg.phase_budget {
            return Err(Error::BudgetExhausted {
                phase: phase.label().to_string(),
                steps: used,
                best_rho_in: self.body.inner_radius(),
            });
        }
        Ok(())
    }

    fn last_tau(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.tau)
    }

    /// Dilates to mean width 1; not a symmetrization step.
    fn renormalize(&mut self) {
        self.body = self.body.scaled(1.0 / self.mean_width);
        self.mean_width = self.body.mean_width();
        self.begin_phase();
    }

    fn begin_phase(&mut self) {
        self.phase_mean_width = self.mean_width;
        self.tau_sum = 0.0;
    }

    /// One symmetral with the monotonicity, conservation and net checks.
    fn step(&mut self, phase: Phase) -> Result<GridAngle> {
        let a = self.strategy.next_grid_angle(self.body.m())?;
        let (rho_in, rho_out) = (self.body.inner_radius(), self.body.outer_radius());
        let s = symmetral(&self.body, a, self.cfg.raster_g)?;
        let tau = s.tolerance();
        self.tau_sum += tau;
        self.body = s.body;
        self.mean_width = self.body.mean_width();
        let (new_in, new_out) = (self.body.inner_radius(), self.body.outer_radius());
        if new_in < rho_in - tau {
            return Err(self.violation(phase, format!("inner radius fell from {rho_in} to {new_in} (tau {tau})")));
        }
        if new_out > rho_out + tau {
            return Err(self.violation(phase, format!("outer radius grew from {rho_out} to {new_out} (tau {tau})")));
        }
        // Thin features can lose more than τ in one step when a summed spike tip
        // falls between grid rays; the phase-level drift is what is bounded.
        let drift = (self.mean_width - self.phase_mean_width).abs();
        if drift > self.tau_sum {
            return Err(self.violation(
                phase,
                format!("mean width drifted by {drift} over the phase, accumulated tau {}", self.tau_sum),
            ));
        }
        let net = match self.net_eps {
            Some(eps) => {
                let held = self.body.net_contained_within(eps, tau)?;
                if self.net_held && !held && !self.body.net_contained_within(eps, 2.0 * tau)? {
                    return Err(self.violation(phase, format!("net containment at {eps} was lost")));
                }
                self.net_held |= held;
                Some(held)
            }
            None => None,
        };
        self.records.push(self.record(phase, Some(a.direction()), net, tau));
        Ok(a)
    }

    /// Returns the step count and the final inner radius of the inscribed interval.
    fn seed_ball(&mut self, target: f64) -> Result<(usize, f64)> {
        let m = self.body.m();
        let peak = (0..m).max_by(|&i, &j| self.body.radii()[i].total_cmp(&self.body.radii()[j])).unwrap_or(0);
        let interval = IntervalBody::new(self.body.outer_radius(), GridAngle::new(peak, m)?.direction())?;
        let grid = Arc::new(SphereQuadrature::from_kind(crate::geom::CloudKind::Grid { m })?);
        let mut track = SupportBody::from_interval(grid, &interval)?;
        let mut track_in = track.sandwich_radii()?.0;
        self.begin_phase();
        let mut used = 0;
        loop {
            let reached = if self.cfg.via_interval { track_in >= target } else { self.body.inner_radius() >= target };
            if reached {
                return Ok((used, track_in));
            }
            self.budget(Phase::Seed, used)?;
            let a = self.step(Phase::Seed)?;
            used += 1;
            track = track.symmetral_support(&a.direction())?.body;
            track_in = track.sandwich_radii()?.0;
            let tau = self.last_tau();
            if self.body.inner_radius() < track_in - tau {
                return Err(self.violation(
                    Phase::Seed,
                    format!("inner radius {} below the inscribed interval's {track_in}", self.body.inner_radius()),
                ));
            }
        }
    }

    /// Returns the step count and the exact hull sandwich radii.
    fn round_hull(&mut self, eps: f64) -> Result<(usize, (f64, f64))> {
        self.renormalize();
        self.net_eps = Some(eps);
        let mut hull = SupportBody::from_star(&self.body)?;
        let mut used = 0;
        loop {
            let (lo, hi) = hull.sandwich_radii()?;
            if lo >= 1.0 - eps && hi <= 1.0 + eps {
                let tau = self.last_tau();
                if !self.body.net_contained_within(eps, tau)? {
                    return Err(self.violation(
                        Phase::Hull,
                        format!("hull within 1 ± {eps} but net distance {} exceeds 2√ε + τ", self.body.net_distance(eps)),
                    ));
                }
                self.net_held = true;
                return Ok((used, (lo, hi)));
            }
            self.budget(Phase::Hull, used)?;
            let a = self.step(Phase::Hull)?;
            used += 1;
            hull = hull.symmetral_support(&a.direction())?.body;
        }
    }

    fn grow_ball(&mut self, params: &LemmaParams) -> Result<(usize, usize)> {
        params.check_growth()?;
        let eps = params.eps_internal;
        if !self.body.net_contained_within(eps, self.last_tau())? {
            return Err(self.violation(Phase::GrowA, format!("net containment at {eps} does not hold on entry")));
        }
        let (sq, q) = (eps.sqrt(), q_factor(eps)?);
        self.begin_phase();
        let mut n_a = 0;
        while self.body.inner_radius() < 2.0 * sq {
            self.budget(Phase::GrowA, n_a)?;
            let r = self.body.inner_radius();
            self.step(Phase::GrowA)?;
            n_a += 1;
            let (r_new, tau) = (self.body.inner_radius(), self.last_tau());
            if r_new < q * r - tau {
                return Err(self.violation(Phase::GrowA, format!("inner radius {r_new} < q·r − τ = {}", q * r - tau)));
            }
        }
        let mut n_b = 0;
        while self.body.inner_radius() < 1.0 - 4.0 * sq {
            self.budget(Phase::GrowB, n_b)?;
            let r = self.body.inner_radius();
            self.step(Phase::GrowB)?;
            n_b += 1;
            let (r_new, tau) = (self.body.inner_radius(), self.last_tau());
            let bound = (1.0 - (2.0 * sq + eps) + r) / 2.0 - tau;
            if r_new < bound {
                return Err(self.violation(Phase::GrowB, format!("inner radius {r_new} < halved-gap bound {bound}")));
            }
        }
        Ok((n_a, n_b))
    }
}

/// Phase 1 on its own: symmetrals until `ρ_in ≥ target`.
pub fn phase1_seed_ball(
    k0: &StarBody2D,
    strategy: &mut Strategy,
    target: f64,
    cfg: &PipelineConfig,
) -> Result<(StarBody2D, usize)> {
    let mut d = Driver::new(k0.clone(), strategy, cfg);
    let (steps, _) = d.seed_ball(target)?;
    Ok((d.body, steps))
}

/// Phase 2 on its own. The body is rescaled to mean width 1 first.
pub fn phase2_round_hull(
    k1: &StarBody2D,
    strategy: &mut Strategy,
    eps_internal: f64,
    cfg: &PipelineConfig,
) -> Result<(StarBody2D, usize)> {
    check_open_unit("eps_internal", eps_internal)?;
    let mut d = Driver::new(k1.clone(), strategy, cfg);
    let (steps, _) = d.round_hull(eps_internal)?;
    Ok((d.body, steps))
}

/// Outcome of [`phase3_grow_ball`].
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRun {
    pub body: StarBody2D,
    pub n_a: usize,
    pub n_b: usize,
    /// Starting record followed by one record per step, tagged 3a or 3b.
    pub records: Vec<StepRecord>,
}

/// Phase 3 on its own, from a body net-contained at `params.eps_internal`.
pub fn phase3_grow_ball(
    k2: &StarBody2D,
    strategy: &mut Strategy,
    params: &LemmaParams,
    cfg: &PipelineConfig,
) -> Result<GrowthRun> {
    let mut d = Driver::new(k2.clone(), strategy, cfg);
    d.net_eps = Some(params.eps_internal);
    d.net_held = true;
    let (n_a, n_b) = d.grow_ball(&params.with_radius(k2.inner_radius()))?;
    Ok(GrowthRun { body: d.body, n_a, n_b, records: d.records })
}

/// Full run for a planar star body and target accuracy `ε ∈ (0, 1/2)`.
pub fn run_theorem(
    k: &StarBody2D,
    eps: f64,
    strategy: &mut Strategy,
    cfg: &PipelineConfig,
) -> std::result::Result<RunReport, RunFailure> {
    let start = Instant::now();
    let params = LemmaParams::new(eps, 2);
    let m0 = k.mean_width();
    let mut report = RunReport {
        n: 2,
        eps,
        eps_internal: params.as_ref().map_or(f64::NAN, |p| p.eps_internal),
        seed: seed_of(strategy),
        m0,
        n1: 0,
        n2: 0,
        n3a: 0,
        n3b: 0,
        budget_a: 0,
        budget_b: 0,
        final_rho_in: k.inner_radius(),
        final_rho_out: k.outer_radius(),
        interval_rho_in: None,
        hull_radii: None,
        records: Vec::new(),
        warnings: Vec::new(),
        wall_time: Duration::ZERO,
        body: k.clone(),
    };
    let fail = |error: Error, mut report: RunReport| {
        report.wall_time = start.elapsed();
        RunFailure { error, partial: Box::new(report) }
    };
    let params = match params {
        Ok(p) => p,
        Err(e) => return Err(fail(e, report)),
    };
    if !(m0 > 0.0) {
        return Err(fail(Error::EmptyBody, report));
    }

    let mut d = Driver::new(k.scaled(1.0 / m0), strategy, cfg);
    let result = (|| -> Result<()> {
        let (n1, interval_in) = d.seed_ball(cfg.c2 / 2f64.sqrt())?;
        report.n1 = n1;
        report.interval_rho_in = Some(interval_in);
        let (n2, hull) = d.round_hull(params.eps_internal)?;
        report.n2 = n2;
        report.hull_radii = Some(hull);
        let params = params.with_radius(d.body.inner_radius());
        let sq = params.eps_internal.sqrt();
        report.budget_a = if params.r < 2.0 * sq { case_a_budget(params.eps_internal, params.r)? } else { 0 };
        report.budget_b = case_b_budget(params.eps_internal)?;
        let (n3a, n3b) = d.grow_ball(&params)?;
        report.n3a = n3a;
        report.n3b = n3b;
        let (rho_in, rho_out, tau) = (d.body.inner_radius(), d.body.outer_radius(), d.last_tau());
        if rho_in < 1.0 - eps - tau || rho_out > 1.0 + eps + tau {
            return Err(d.violation(
                Phase::GrowB,
                format!("final radii ({rho_in}, {rho_out}) outside 1 ± {eps} with tau {tau}"),
            ));
        }
        Ok(())
    })();

    report.final_rho_in = d.body.inner_radius();
    report.final_rho_out = d.body.outer_radius();
    if report.budget_a > 0 && report.n3a > 2 * report.budget_a {
        report.warnings.push(format!("case a took {} steps, budget {}", report.n3a, report.budget_a));
    }
    if report.n3b > 2 * report.budget_b {
        report.warnings.push(format!("case b took {} steps, budget {}", report.n3b, report.budget_b));
    }
    report.records = std::mem::take(&mut d.records);
    report.body = d.body;
    report.wall_time = start.elapsed();
    match result {
        Ok(()) => Ok(report),
        Err(e) => Err(fail(e, report)),
    }
}

/// Symmetrals until `rule` fires. The rule must contain a step bound.
pub fn run_until(
    k: &StarBody2D,
    strategy: &mut Strategy,
    rule: &StopRule,
    cfg: &PipelineConfig,
) -> Result<(StarBody2D, Vec<StepRecord>)> {
    rule.validate()?;
    let mut d = Driver::new(k.clone(), strategy, cfg);
    while !rule.should_stop(d.records.last().expect("initial record")) {
        d.step(Phase::Seed)?;
    }
    Ok((d.body, d.records))
}

/// Outcome of the seed-ball phase in support form.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalRun {
    pub body: SupportBody,
    pub steps: usize,
    pub records: Vec<StepRecord>,
    /// Mean width of the starting body on its cloud.
    pub m0: f64,
}

fn support_record(step: usize, body: &SupportBody, direction: Option<Direction>, tau: f64) -> Result<StepRecord> {
    let (rho_in, rho_out) = body.sandwich_radii()?;
    Ok(StepRecord {
        step,
        phase: Phase::Seed,
        direction,
        rho_in,
        rho_out,
        mean_width: body.mean_width(),
        raddist: body.sup_distance(1.0),
        net: None,
        tau,
    })
}

/// Phase 1 in support form: `body` rescaled to mean width 1 and symmetrized
/// until `min h ≥ c₂/√n`. Interpolated steps are convex combinations of node
/// values, so `min h` and `max h` are monotone exactly.
pub fn phase1_support(body: &SupportBody, strategy: &mut Strategy, c2: f64, budget: usize) -> Result<IntervalRun> {
    let n = body.dim();
    if strategy.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: strategy.dim() });
    }
    let m0 = body.mean_width();
    if !(m0 > 0.0) {
        return Err(Error::EmptyBody);
    }
    let mut body = body.scaled(1.0 / m0);
    let target = c2 / (n as f64).sqrt();
    let mut records = vec![support_record(0, &body, None, 0.0)?];
    let mut steps = 0;
    loop {
        let (lo, hi) = body.sandwich_radii()?;
        if lo >= target {
            return Ok(IntervalRun { body, steps, records, m0 });
        }
        if steps >= budget {
            return Err(Error::BudgetExhausted { phase: Phase::Seed.label().to_string(), steps, best_rho_in: lo });
        }
        let u = strategy.next_direction()?;
        let s = body.symmetral_support(&u)?;
        body = s.body;
        steps += 1;
        let rec = support_record(steps, &body, Some(u), s.max_error)?;
        if rec.rho_in < lo - 1e-12 || rec.rho_out > hi + 1e-12 {
            return Err(Error::InvariantViolation {
                phase: Phase::Seed.label().to_string(),
                step: steps,
                detail: format!("support range left [{lo}, {hi}]: ({}, {})", rec.rho_in, rec.rho_out),
            });
        }
        records.push(rec);
    }
}

/// [`phase1_support`] started from the interval `[0, e₁]` on `cloud`.
pub fn phase1_interval(
    cloud: Arc<SphereQuadrature>,
    strategy: &mut Strategy,
    c2: f64,
    budget: usize,
) -> Result<IntervalRun> {
    let n = cloud.dim();
    let interval = IntervalBody::new(1.0, Direction::axis(n, 0)?)?;
    phase1_support(&SupportBody::from_interval(cloud, &interval)?, strategy, c2, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star2d::generators::*;

    #[test]
    fn q_factor_examples() {
        assert_eq!(q_factor(EPS0).unwrap(), 6.0 / 5.0);
        assert_eq!(q_factor(0.25).unwrap(), 3.0 / 8.0);
        assert!(q_factor(0.01).unwrap() > q_factor(0.04).unwrap());
        assert!(q_factor(0.0).is_err());
        assert!(q_factor(1.0).is_err());
    }

    #[test]
    fn budget_examples() {
        assert_eq!(case_b_budget(1.0 / 16.0).unwrap(), 2);
        let eps = 0.01;
        assert_eq!(case_a_budget(eps, 2.0 * eps.sqrt()).unwrap(), (4.0 + 3.0 * 4f64.ln()).ceil() as usize);
        let (na, nb) = budget_bounds(0.01, 0.01).unwrap();
        assert_eq!(na, (4.0 + 3.0 * 100f64.ln()).ceil() as usize);
        assert_eq!(nb, 4);
        assert!(budget_bounds(1.0 / 16.0, 0.5).is_err());
        assert!(budget_bounds(0.01, 1.0).is_err());
    }

    #[test]
    fn internal_accuracy_meets_the_target() {
        for eps in [0.4, 0.2, 0.1, 0.05, 0.025, 0.001] {
            let e = internal_accuracy(eps).unwrap();
            assert!(e < EPS0);
            assert!(1.0 - 4.0 * e.sqrt() >= 1.0 - eps - 1e-15);
        }
        assert!(internal_accuracy(0.5).is_err());
    }

    #[test]
    fn ball_needs_no_steps() {
        let mut s = Strategy::grid_random(1, 720).unwrap();
        let report = run_theorem(&gen_disc(720, 5.0).unwrap(), 0.1, &mut s, &PipelineConfig::default()).unwrap();
        assert_eq!(report.total(), 0);
        assert!((report.final_rho_in - 1.0).abs() < 1e-12);
        assert!((report.final_rho_out - 1.0).abs() < 1e-12);
        assert_eq!(report.records.len(), 1);
    }

    #[test]
    fn phase1_on_a_ball_and_a_segment() {
        let cfg = PipelineConfig::default();
        let mut s = Strategy::grid_random(3, 720).unwrap();
        let (_, steps) = phase1_seed_ball(&gen_disc(720, 1.0).unwrap(), &mut s, 0.2 / 2f64.sqrt(), &cfg).unwrap();
        assert_eq!(steps, 0);
        let seg = gen_segment(720, 1.0, 0).unwrap();
        let seg = seg.scaled(1.0 / seg.mean_width());
        let (k1, steps) = phase1_seed_ball(&seg, &mut s, 0.2 / 2f64.sqrt(), &cfg).unwrap();
        assert!(steps > 0);
        assert!(k1.inner_radius() >= 0.2 / 2f64.sqrt());
    }

    #[test]
    fn phase3_from_a_shrunken_ball() {
        let params = LemmaParams::new(0.1, 2).unwrap();
        let eps = params.eps_internal;
        let k2 = gen_disc(720, 1.0 - eps).unwrap();
        let mut s = Strategy::grid_random(5, 720).unwrap();
        let run = phase3_grow_ball(&k2, &mut s, &params, &PipelineConfig::default()).unwrap();
        assert_eq!((run.n_a, run.n_b), (0, 0));
        assert_eq!(run.body, k2);
    }

    #[test]
    fn phase3_from_a_sandwiched_body() {
        let eps = 0.01;
        let k2 = gen_sandwiched(4, 720, eps).unwrap();
        let params = LemmaParams::growth(eps, k2.inner_radius(), 2).unwrap();
        let mut s = Strategy::grid_random(4, 720).unwrap();
        let run = phase3_grow_ball(&k2, &mut s, &params, &PipelineConfig::default()).unwrap();
        assert!(run.n_a + run.n_b > 0);
        assert_eq!(run.records.len(), run.n_a + run.n_b + 1);
        assert!(run.body.inner_radius() >= 1.0 - 4.0 * eps.sqrt());
    }

    #[test]
    fn cross_run_meets_the_sandwich() {
        let cross = gen_cross(720, 1.0, 0.1).unwrap();
        let mut s = Strategy::grid_random(7, 720).unwrap();
        let r = run_theorem(&cross, 0.1, &mut s, &PipelineConfig::default()).unwrap();
        let tau = r.max_tau();
        assert!(r.final_rho_in >= 0.9 - tau, "{}", r.final_rho_in);
        assert!(r.final_rho_out <= 1.1 + tau, "{}", r.final_rho_out);
        assert_eq!(r.records.len(), r.total() + 1);
        for w in r.records.windows(2) {
            assert!(w[1].rho_in >= w[0].rho_in - w[1].tau);
        }
    }

    #[test]
    fn interval_phase_reaches_target() {
        let cloud = Arc::new(crate::geom::sphere_quadrature(3, 1024).unwrap());
        let mut s = Strategy::uniform_random(3, 11).unwrap();
        let run = phase1_interval(cloud, &mut s, DEFAULT_C2, 200).unwrap();
        assert!(run.steps > 0);
        assert!(run.records.last().unwrap().rho_in >= DEFAULT_C2 / 3f64.sqrt());
        assert!((run.m0 - 0.25).abs() < 1e-2);
    }

    #[test]
    fn run_until_respects_the_step_bound() {
        let k = gen_random_star(4, 720, 0.2, 1.0).unwrap();
        let mut s = Strategy::grid_random(4, 720).unwrap();
        let rule = StopRule::InnerRadiusAtLeast(2.0).or(StopRule::MaxSteps(3));
        let (_, recs) = run_until(&k, &mut s, &rule, &PipelineConfig::default()).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(run_until(&k, &mut s, &StopRule::InnerRadiusAtLeast(2.0), &PipelineConfig::default()).is_err());
    }
}
