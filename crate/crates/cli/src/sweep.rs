use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use minksym_core::pipeline::phase1_interval;
use minksym_core::star2d::generators::{gen_cross, gen_spiky};
use minksym_core::{run_theorem, PipelineConfig, RunReport, SphereQuadrature, StarBody2D};
use rayon::prelude::*;

use crate::args::{SweepArgs, SweepMode, SweepShape};
use crate::error::{core_exit_code, exit, CliError, Result};
use crate::report::{num, SWEEP_COLUMNS};
use crate::run::{build_strategy, output_path};
use crate::shape::Shape;

/// Grid size of the built-in sweep shapes.
pub const SWEEP_M: usize = 720;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    /// `None` in interval mode, where the accuracy plays no part.
    pub eps: Option<f64>,
    pub seed: u64,
    /// Exit code of the run (0 for success).
    pub code: i32,
    pub error: Option<String>,
    pub n1: usize,
    pub n2: usize,
    pub n3a: usize,
    pub n3b: usize,
    pub budget_a: usize,
    pub budget_b: usize,
    pub final_rho_in: f64,
    pub final_rho_out: f64,
    pub max_tau: f64,
    pub warnings: Vec<String>,
}

impl SweepRow {
    pub fn total(&self) -> usize {
        self.n1 + self.n2 + self.n3a + self.n3b
    }

    pub fn ok(&self) -> bool {
        self.code == exit::OK
    }

    fn from_report(r: &RunReport, seed: u64, failure: Option<&minksym_core::Error>) -> Self {
        Self {
            n: r.n,
            eps: Some(r.eps),
            seed,
            code: failure.map_or(exit::OK, core_exit_code),
            error: failure.map(ToString::to_string),
            n1: r.n1,
            n2: r.n2,
            n3a: r.n3a,
            n3b: r.n3b,
            budget_a: r.budget_a,
            budget_b: r.budget_b,
            final_rho_in: r.final_rho_in,
            final_rho_out: r.final_rho_out,
            max_tau: r.max_tau(),
            warnings: r.warnings.clone(),
        }
    }
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn least_squares(points: &[(f64, f64)]) -> Option<Fit> {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if points.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(Fit { slope, intercept: my - slope * mx })
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k == 0 {
        return f64::NAN;
    }
    if k % 2 == 1 {
        values[k / 2]
    } else {
        0.5 * (values[k / 2 - 1] + values[k / 2])
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub mode: SweepMode,
    pub rows: Vec<SweepRow>,
    pub fit: Option<Fit>,
}

impl SweepOutcome {
    /// Median step count of successful runs per `(n, eps)`: totals in
    /// theorem mode, phase-1 counts in interval mode.
    pub fn medians(&self) -> BTreeMap<(usize, u64), (Option<f64>, f64)> {
        let mut groups: BTreeMap<(usize, u64), (Option<f64>, Vec<f64>)> = BTreeMap::new();
        for r in self.rows.iter().filter(|r| r.ok()) {
            // Keyed on −ln ε bits so larger |log ε| sorts later.
            let key = (r.n, r.eps.map_or(0, |e| (-e.ln()).to_bits()));
            groups.entry(key).or_insert((r.eps, Vec::new())).1.push(r.total() as f64);
        }
        groups.into_iter().map(|(k, (eps, mut v))| (k, (eps, median(&mut v)))).collect()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok()).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(SWEEP_COLUMNS)?;
        for r in &self.rows {
            let status = match (&r.error, r.code) {
                (None, _) => "ok".to_string(),
                (Some(_), exit::INVARIANT) => "invariant".to_string(),
                (Some(_), exit::BUDGET) => "budget".to_string(),
                (Some(_), _) => "error".to_string(),
            };
            let mut notes = r.warnings.clone();
            notes.extend(r.error.clone());
            let theorem = self.mode == SweepMode::Theorem;
            let count = |v: usize| if theorem { v.to_string() } else { String::new() };
            w.write_record([
                r.n.to_string(),
                r.eps.map(num).unwrap_or_default(),
                r.seed.to_string(),
                status,
                r.n1.to_string(),
                count(r.n2),
                count(r.n3a),
                count(r.n3b),
                r.total().to_string(),
                count(r.budget_a),
                count(r.budget_b),
                num(r.final_rho_in),
                num(r.final_rho_out),
                num(r.max_tau),
                notes.join("; "),
                String::new(),
                String::new(),
            ])?;
        }
        let (slope, intercept) = self.fit.map_or((String::new(), String::new()), |f| (num(f.slope), num(f.intercept)));
        let mut fit_row = vec![String::new(); SWEEP_COLUMNS.len()];
        fit_row[3] = "fit".to_string();
        fit_row[15] = slope;
        fit_row[16] = intercept;
        w.write_record(&fit_row)?;
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn sweep_shape(args: &SweepArgs) -> Result<StarBody2D> {
    if let Some(path) = &args.shape {
        return match Shape::read(path)? {
            Shape::Radial(k) => Ok(k),
            Shape::Support(_) => Err(CliError::usage("theorem sweeps need a radial shape")),
        };
    }
    Ok(match args.gen {
        SweepShape::Cross => gen_cross(SWEEP_M, 1.0, 0.1)?,
        SweepShape::Spiky => gen_spiky(SWEEP_M, 12, 1.0, 0.2)?,
    })
}

/// Runs every grid point; failed runs become rows, never errors.
pub fn sweep(args: &SweepArgs) -> Result<SweepOutcome> {
    if args.eps.is_empty() || args.n.is_empty() || args.seeds == 0 {
        return Err(CliError::usage("sweep grid is empty"));
    }
    let seeds: Vec<u64> = (args.seed_start..args.seed_start + args.seeds).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {} workers: {e}", args.jobs)))?;
    let rows = match args.mode {
        SweepMode::Theorem => {
            if args.n.iter().any(|&n| n != 2) {
                return Err(CliError::usage("theorem mode is planar; use --mode interval for n > 2"));
            }
            let k = sweep_shape(args)?;
            let cfg = PipelineConfig { raster_g: args.raster_g, c2: args.c2, phase_budget: args.budget, via_interval: false };
            let jobs: Vec<(f64, u64)> = args.eps.iter().flat_map(|&e| seeds.iter().map(move |&s| (e, s))).collect();
            // Strategies are built up front so usage errors surface before any work.
            let strategies =
                jobs.iter().map(|&(_, s)| build_strategy(args.strategy, 2, Some(k.m()), s)).collect::<Result<Vec<_>>>()?;
            pool.install(|| {
                jobs.par_iter()
                    .zip(strategies)
                    .map(|(&(eps, seed), mut strategy)| match run_theorem(&k, eps, &mut strategy, &cfg) {
                        Ok(r) => SweepRow::from_report(&r, seed, None),
                        Err(f) => SweepRow::from_report(&f.partial, seed, Some(&f.error)),
                    })
                    .collect::<Vec<_>>()
            })
        }
        SweepMode::Interval => {
            let mut clouds = Vec::new();
            for &n in &args.n {
                clouds.push((n, Arc::new(minksym_core::sphere_quadrature(n, args.cloud_factor * n)?)));
            }
            let jobs: Vec<(usize, Arc<SphereQuadrature>, u64)> =
                clouds.iter().flat_map(|(n, c)| seeds.iter().map(move |&s| (*n, Arc::clone(c), s))).collect();
            let strategies = jobs
                .iter()
                .map(|(n, c, s)| build_strategy(args.strategy, *n, if *n == 2 { c.grid_size() } else { None }, *s))
                .collect::<Result<Vec<_>>>()?;
            pool.install(|| {
                jobs.par_iter()
                    .zip(strategies)
                    .map(|((n, cloud, seed), mut strategy)| {
                        interval_row(*n, *seed, phase1_interval(Arc::clone(cloud), &mut strategy, args.c2, args.budget))
                    })
                    .collect::<Vec<_>>()
            })
        }
    };
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.ok())
        .map(|r| match r.eps {
            Some(e) => (r.n as f64 * e.ln().abs(), r.total() as f64),
            None => (r.n as f64, r.n1 as f64),
        })
        .collect();
    Ok(SweepOutcome { mode: args.mode, rows, fit: least_squares(&points) })
}

fn interval_row(n: usize, seed: u64, run: minksym_core::Result<minksym_core::pipeline::IntervalRun>) -> SweepRow {
    let mut row = SweepRow {
        n,
        eps: None,
        seed,
        code: exit::OK,
        error: None,
        n1: 0,
        n2: 0,
        n3a: 0,
        n3b: 0,
        budget_a: 0,
        budget_b: 0,
        final_rho_in: f64::NAN,
        final_rho_out: f64::NAN,
        max_tau: 0.0,
        warnings: Vec::new(),
    };
    match run {
        Ok(r) => {
            let last = r.records.last().expect("starting record");
            row.n1 = r.steps;
            row.final_rho_in = last.rho_in;
            row.final_rho_out = last.rho_out;
            row.max_tau = r.records.iter().map(|x| x.tau).fold(0.0, f64::max);
        }
        Err(e) => {
            row.code = core_exit_code(&e);
            row.error = Some(e.to_string());
        }
    }
    row
}

pub fn cmd_sweep(args: &SweepArgs, out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<SweepOutcome> {
    let outcome = sweep(args)?;
    let path = output_path(args.out.as_deref(), out_dir, "sweep.csv")?;
    let file = File::create(&path).map_err(|e| CliError::io(&path, e))?;
    outcome.write_csv(BufWriter::new(file))?;
    let _ = writeln!(stdout, "csv {}", path.display());
    let what = if args.mode == SweepMode::Theorem { "total" } else { "n1" };
    for ((n, _), (eps, med)) in outcome.medians() {
        let eps = eps.map_or(String::new(), |e| format!(" eps={e}"));
        let _ = writeln!(stdout, "n={n}{eps} median {what}={med}");
    }
    if let Some(f) = outcome.fit {
        let _ = writeln!(stdout, "fit slope={} intercept={}", num(f.slope), num(f.intercept));
    }
    let failed = outcome.failures();
    if failed > 0 {
        let code = outcome.rows.iter().map(|r| r.code).filter(|&c| c != exit::OK).min().unwrap_or(exit::INVARIANT);
        return Err(CliError::SweepFailed { failed, total: outcome.rows.len(), code });
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_recovers_a_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 * i as f64 + 1.0)).collect();
        let f = least_squares(&pts).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!(least_squares(&[(1.0, 2.0)]).is_none());
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
