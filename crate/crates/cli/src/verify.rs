//! Property batteries behind `verify`. Every case is seeded, so a failure
//! line is enough to replay it.

use std::io::Write;

use minksym_core::oracle::naive_minkowski_sum;
use minksym_core::pipeline::{budget_bounds, phase3_grow_ball, q_factor, LemmaParams, EPS0};
use minksym_core::star2d::generators::{blunted, gen_random_spiky, gen_random_star, gen_sandwiched};
use minksym_core::{minkowski_sum, symmetral, GridAngle, Phase, PipelineConfig, SeedStream, StarBody2D, Strategy, SupportBody};
use rand::Rng;

use crate::args::{Suite, VerifyArgs};
use crate::error::{CliError, Result};

const M: usize = 720;

/// Coarse and fine raster sides for the oracle comparison.
pub const ORACLE_COARSE_G: usize = 128;
pub const ORACLE_FINE_G: usize = 1024;
/// Agreement bound in coarse cells.
pub const ORACLE_CELLS: f64 = 4.0;
/// Radius bounds of the oracle suite's random stars.
pub const ORACLE_STAR_BOUNDS: (f64, f64) = (0.5, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub note: String,
}

impl Check {
    fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), cases: 0, failures: Vec::new(), note: String::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `PASS <name> cases=<k> <note>` or `FAIL <name> cases=<k> failed=<j> first: <case>`.
    pub fn line(&self) -> String {
        if self.passed() {
            format!("PASS {} cases={} {}", self.name, self.cases, self.note).trim_end().to_string()
        } else {
            format!("FAIL {} cases={} failed={} first: {}", self.name, self.cases, self.failures.len(), self.failures[0])
        }
    }
}

/// A random star or a blunted random spiky body, alternating with `i`.
pub fn test_body(seed: u64, i: usize) -> Result<StarBody2D> {
    let mut stream = SeedStream::new(seed);
    let rng = stream.rng();
    Ok(if i % 2 == 0 {
        let lo = rng.random_range(0.05..0.6);
        gen_random_star(rng.random(), M, lo, 1.0)?
    } else {
        let spikes = rng.random_range(6..20);
        blunted(&gen_random_spiky(rng.random(), M, spikes, (0.1, 0.4), (0.6, 1.2))?, 1)?
    })
}

fn case_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

pub fn lemma2(count: usize, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for eps in [0.04, 0.01] {
        let mut c = Check::new(format!("lemma2 eps={eps}"));
        let mut worst: f64 = 0.0;
        for i in 0..count {
            let s = case_seed(seed, i);
            let k = gen_sandwiched(s, M, eps)?;
            let (lo, hi) = SupportBody::from_star(&k)?.sandwich_radii()?;
            let sandwiched = lo >= 1.0 - eps && hi <= 1.0 + eps;
            let d = k.net_distance(eps);
            worst = worst.max(d / (2.0 * eps.sqrt()));
            c.record(sandwiched && k.net_contained(eps)?, || format!("seed={s} hull=[{lo}, {hi}] net distance={d}"));
        }
        c.note = format!("max net distance / 2√ε = {worst:.4}");
        checks.push(c);
    }
    Ok(checks)
}

pub fn lemma4(count: usize, seed: u64, g: usize) -> Result<Vec<Check>> {
    let mut q = Check::new("lemma4 q(1/25)=6/5");
    let q0 = q_factor(EPS0)?;
    q.record(q0 == 6.0 / 5.0, || format!("q = {q0}"));

    let mut budgets = Check::new("lemma4 budgets");
    let mut stream = SeedStream::new(case_seed(seed, usize::MAX));
    for _ in 0..10 {
        let eps = stream.rng().random_range(1e-5..EPS0);
        let r = stream.rng().random_range(1e-3..1.0);
        let (na, nb) = budget_bounds(eps, r)?;
        let want_a = (4.0 + 3.0 * (eps / (r * r)).ln().abs()).ceil() as usize;
        let want_b = (0.5 * eps.log2()).abs().ceil() as usize;
        budgets.record(na == want_a && nb == want_b, || format!("eps={eps} r={r}: ({na}, {nb}) vs ({want_a}, {want_b})"));
    }

    let cfg = PipelineConfig { raster_g: g, ..PipelineConfig::default() };
    let mut case_a = Check::new("lemma4 case a: rho' >= q rho - tau");
    let mut case_b = Check::new("lemma4 case b: rho' >= ((1 - (2√ε + ε)) + rho)/2 - tau");
    let mut runs = Check::new("lemma4 phase-3 runs");
    for eps in [0.01f64, 0.0025] {
        let (sq, q) = (eps.sqrt(), q_factor(eps)?);
        for i in 0..count {
            let s = case_seed(seed, i);
            let k = gen_sandwiched(s, M, eps)?;
            let params = LemmaParams::growth(eps, k.inner_radius(), 2)?;
            let mut strategy = Strategy::grid_random(s, M)?;
            let run = match phase3_grow_ball(&k, &mut strategy, &params, &cfg) {
                Ok(run) => run,
                Err(e) => {
                    runs.record(false, || format!("eps={eps} seed={s}: {e}"));
                    continue;
                }
            };
            runs.record(run.body.inner_radius() >= 1.0 - 4.0 * sq - run.records.last().map_or(0.0, |r| r.tau), || {
                format!("eps={eps} seed={s}: stopped at {}", run.body.inner_radius())
            });
            for w in run.records.windows(2) {
                let (prev, next) = (&w[0], &w[1]);
                match next.phase {
                    Phase::GrowA => {
                        let bound = q * prev.rho_in - next.tau;
                        case_a.record(next.rho_in >= bound, || {
                            format!("eps={eps} seed={s} step {}: {} < {bound}", next.step, next.rho_in)
                        });
                    }
                    Phase::GrowB => {
                        let bound = (1.0 - (2.0 * sq + eps) + prev.rho_in) / 2.0 - next.tau;
                        case_b.record(next.rho_in >= bound, || {
                            format!("eps={eps} seed={s} step {}: {} < {bound}", next.step, next.rho_in)
                        });
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(vec![q, budgets, runs, case_a, case_b])
}

pub fn conservation(count: usize, seed: u64, g: usize) -> Result<Vec<Check>> {
    let mut mean = Check::new("conservation |dM*| <= tau");
    let mut inner = Check::new("monotone rho_in' >= rho_in - tau");
    let mut outer = Check::new("monotone rho_out' <= rho_out + tau");
    let mut commute = Check::new("commutation h(M_u K) = (h + h∘R_u)/2 within tau");
    let mut exact = Check::new("conservation exact support mode <= 1e-12");
    let (mut worst_mean, mut worst_commute): (f64, f64) = (0.0, 0.0);
    for i in 0..count {
        let s = case_seed(seed, i);
        let k = test_body(s, i)?;
        let a = ((s.wrapping_mul(0x2545_F491_4F6C_DD1D) >> 32) % M as u64) as usize;
        let angle = GridAngle::new(a, M)?;
        let out = symmetral(&k, angle, g)?;
        let (body, tau) = (&out.body, out.tolerance());
        let dm = (body.mean_width() - k.mean_width()).abs();
        worst_mean = worst_mean.max(dm / tau);
        mean.record(dm <= tau, || format!("seed={s} a={a}: {dm} > {tau}"));
        inner.record(body.inner_radius() >= k.inner_radius() - tau, || {
            format!("seed={s} a={a}: {} -> {}", k.inner_radius(), body.inner_radius())
        });
        outer.record(body.outer_radius() <= k.outer_radius() + tau, || {
            format!("seed={s} a={a}: {} -> {}", k.outer_radius(), body.outer_radius())
        });

        let sym = SupportBody::from_star(&k)?.symmetral_support(&angle.direction())?;
        let raster = SupportBody::from_star(body)?;
        let gap = sym.body.values().iter().zip(raster.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        worst_commute = worst_commute.max(gap / tau);
        commute.record(gap <= tau, || format!("seed={s} a={a}: {gap} > {tau}"));

        let drift = (sym.body.mean_width() - SupportBody::from_star(&k)?.mean_width()).abs();
        exact.record(sym.exact && drift <= 1e-12, || format!("seed={s} a={a}: drift {drift}"));
    }
    mean.note = format!("max |dM*|/tau = {worst_mean:.3}");
    commute.note = format!("max gap/tau = {worst_commute:.3}");
    Ok(vec![mean, inner, outer, commute, exact])
}

/// Worst radial sup-distance between the raster and naive sums, in coarse cells.
pub fn oracle_gap(a: &StarBody2D, b: &StarBody2D) -> Result<f64> {
    let fast = minkowski_sum(a, b, ORACLE_FINE_G)?;
    let (naive, cell) = naive_minkowski_sum(a, b, ORACLE_COARSE_G)?;
    let d = fast.body.radii().iter().zip(naive.radii()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    Ok(d / cell)
}

pub fn oracle(count: usize, seed: u64) -> Result<Vec<Check>> {
    let mut c = Check::new(format!("oracle raster G={ORACLE_FINE_G} vs naive G={ORACLE_COARSE_G} within {ORACLE_CELLS} cells"));
    let (lo, hi) = ORACLE_STAR_BOUNDS;
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let s = case_seed(seed, i);
        let a = gen_random_star(2 * s, M, lo, hi)?;
        let b = gen_random_star(2 * s + 1, M, lo, hi)?;
        let gap = oracle_gap(&a, &b)?;
        worst = worst.max(gap);
        c.record(gap <= ORACLE_CELLS, || format!("seed={s}: {gap:.3} cells"));
    }
    c.note = format!("worst {worst:.3} cells");
    Ok(vec![c])
}

pub fn run_suite(args: &VerifyArgs) -> Result<Vec<Check>> {
    let count = |default: usize| args.count.unwrap_or(default);
    match args.suite {
        Suite::Lemma2 => lemma2(count(50), args.seed),
        Suite::Lemma4 => lemma4(count(20), args.seed, args.raster_g),
        Suite::Conservation => conservation(count(200), args.seed, args.raster_g),
        Suite::Oracle => oracle(count(50), args.seed),
    }
}

pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<Vec<Check>> {
    let checks = run_suite(args)?;
    for c in &checks {
        let _ = writeln!(stdout, "{}", c.line());
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed, total: checks.len() });
    }
    Ok(checks)
}
