use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use minksym_core::geom::CloudKind;
use minksym_core::pipeline::{phase1_support, IntervalRun};
use minksym_core::star2d::generators::*;
use minksym_core::{run_theorem, IntervalBody, PipelineConfig, RunReport, SphereQuadrature, StarBody2D, Strategy, SupportBody};

use crate::args::{GenArgs, GenKind, RunArgs, StrategyName};
use crate::error::{core_exit_code, exit, CliError, Result};
use crate::report::{num, write_steps};
use crate::shape::{parse_cloud, with_dim, Shape};

/// `explicit`, or `name` inside the output directory (current directory if unset).
pub fn output_path(explicit: Option<&Path>, out_dir: Option<&Path>, name: &str) -> Result<PathBuf> {
    if let Some(p) = explicit {
        return Ok(p.to_path_buf());
    }
    let dir = out_dir.unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    Ok(dir.join(name))
}

pub fn build_strategy(name: Option<StrategyName>, n: usize, m: Option<usize>, seed: u64) -> Result<Strategy> {
    let name = name.unwrap_or(if m.is_some() { StrategyName::GridRandom } else { StrategyName::Uniform });
    let planar = |what: &str| match m {
        Some(m) if n == 2 => Ok(m),
        _ => Err(CliError::usage(format!("strategy {what} needs a planar angle grid"))),
    };
    Ok(match name {
        StrategyName::GridRandom => Strategy::grid_random(seed, planar("grid-random")?)?,
        StrategyName::Halving => Strategy::halving_angles(planar("halving")?)?,
        StrategyName::Uniform => Strategy::uniform_random(n, seed)?,
    })
}

fn grid_index(angle_deg: f64, m: usize) -> Result<usize> {
    let t = angle_deg.rem_euclid(360.0) * m as f64 / 360.0;
    let k = t.round();
    if (t - k).abs() > 1e-9 {
        return Err(CliError::usage(format!("angle {angle_deg}° is not on the {m}-angle grid")));
    }
    Ok(k as usize % m)
}

pub fn generate(args: &GenArgs) -> Result<Shape> {
    let m = args.grid_m;
    if args.n > 2 || args.cloud.is_some() {
        let kind = match &args.cloud {
            Some(spec) => with_dim(parse_cloud(spec).map_err(CliError::Usage)?, args.n),
            None => match args.n {
                2 => CloudKind::Grid { m },
                n => minksym_core::sphere_quadrature(n, minksym_core::geom::default_cloud_size(n))?.kind(),
            },
        };
        let cloud = Arc::new(SphereQuadrature::from_kind(kind)?);
        if cloud.dim() != args.n {
            return Err(CliError::usage(format!("cloud is not on S^{}", args.n - 1)));
        }
        let body = match args.kind {
            GenKind::Disc => SupportBody::ball(cloud, args.rho)?,
            GenKind::Segment if args.angle == 0.0 => {
                let e1 = minksym_core::Direction::axis(args.n, 0)?;
                SupportBody::from_interval(cloud, &IntervalBody::new(args.seg_len, e1)?)?
            }
            GenKind::Segment => return Err(CliError::usage("support segments lie along e1; drop --angle")),
            other => return Err(CliError::usage(format!("{other:?} shapes exist only as planar radial shapes"))),
        };
        return Ok(Shape::Support(body));
    }
    let body = match args.kind {
        GenKind::Disc => gen_disc(m, args.rho)?,
        GenKind::Segment => gen_segment(m, args.seg_len, grid_index(args.angle, m)?)?,
        GenKind::Spiky => gen_spiky(m, args.spikes, args.len, args.base)?,
        GenKind::Cross => gen_cross(m, args.arm, args.width)?,
        GenKind::Random => gen_random_star(args.seed, m, args.lo, args.hi)?,
        GenKind::Sandwiched => gen_sandwiched(args.seed, m, args.eps)?,
    };
    Ok(Shape::Radial(body))
}

pub fn cmd_gen(args: &GenArgs, out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<PathBuf> {
    let shape = generate(args)?;
    let name = format!("{}.shape", format!("{:?}", args.kind).to_lowercase());
    let path = output_path(args.out.as_deref(), out_dir, &name)?;
    shape.write(&path)?;
    let s = shape.summary()?;
    let _ = writeln!(stdout, "wrote {}", path.display());
    let _ = writeln!(stdout, "rho_in={} rho_out={} mean_width={}", num(s.rho_in), num(s.rho_out), num(s.mean_width));
    Ok(path)
}

/// Resamples radial values onto a grid of `m` angles through the body's
/// linear interpolation.
pub fn resample(k: &StarBody2D, m: usize) -> Result<StarBody2D> {
    if m == k.m() {
        return Ok(k.clone());
    }
    let r = (0..m).map(|i| k.radial_eval(2.0 * std::f64::consts::PI * i as f64 / m as f64)).collect();
    Ok(StarBody2D::new(r)?)
}

pub enum RunOutcome {
    Theorem(std::result::Result<RunReport, minksym_core::RunFailure>),
    Support(std::result::Result<IntervalRun, minksym_core::Error>),
}

fn write_csv(path: &Path, records: &[minksym_core::StepRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_steps(BufWriter::new(file), records)
}

/// Executes a run, writes the step CSV (partial on failure) and returns the exit code.
pub fn cmd_run(args: &RunArgs, out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    let shape = Shape::read(&args.shape)?;
    let stem = args.shape.file_stem().and_then(|s| s.to_str()).unwrap_or("shape");
    let path = output_path(args.out.as_deref(), out_dir, &format!("run-{stem}-seed{}.csv", args.seed))?;
    let cfg = PipelineConfig { raster_g: args.raster_g, c2: args.c2, phase_budget: args.budget, via_interval: args.via_interval };
    let outcome = match &shape {
        Shape::Radial(k) => {
            let k = resample(k, args.grid_m.unwrap_or(k.m()))?;
            let mut strategy = build_strategy(args.strategy, 2, Some(k.m()), args.seed)?;
            RunOutcome::Theorem(run_theorem(&k, args.eps, &mut strategy, &cfg))
        }
        Shape::Support(b) => {
            let mut strategy = build_strategy(args.strategy, b.dim(), b.cloud().grid_size(), args.seed)?;
            RunOutcome::Support(phase1_support(b, &mut strategy, args.c2, args.budget))
        }
    };
    let _ = writeln!(stdout, "csv {}", path.display());
    match outcome {
        RunOutcome::Theorem(Ok(r)) => {
            write_csv(&path, &r.records)?;
            print_theorem(stdout, &r, args.via_interval);
            Ok(exit::OK)
        }
        RunOutcome::Theorem(Err(f)) => {
            write_csv(&path, &f.partial.records)?;
            print_theorem(stdout, &f.partial, args.via_interval);
            let _ = writeln!(stdout, "FAILED: {}", f.error);
            Ok(core_exit_code(&f.error))
        }
        RunOutcome::Support(Ok(r)) => {
            write_csv(&path, &r.records)?;
            let n = shape.dim();
            let last = r.records.last().expect("starting record");
            let _ = writeln!(stdout, "n={n} n1={} n1/n={}", r.steps, num(r.steps as f64 / n as f64));
            let _ = writeln!(
                stdout,
                "rho_in={} target={} rho_out={} m0={}",
                num(last.rho_in),
                num(args.c2 / (n as f64).sqrt()),
                num(last.rho_out),
                num(r.m0)
            );
            Ok(exit::OK)
        }
        RunOutcome::Support(Err(e)) => {
            let _ = writeln!(stdout, "FAILED: {e}");
            Ok(core_exit_code(&e))
        }
    }
}

fn print_theorem(out: &mut dyn Write, r: &RunReport, via_interval: bool) {
    let _ = writeln!(out, "n1={} n2={} n3a={} n3b={} total={}", r.n1, r.n2, r.n3a, r.n3b, r.total());
    let _ = writeln!(out, "budget_a={} budget_b={} eps_internal={}", r.budget_a, r.budget_b, num(r.eps_internal));
    let _ = writeln!(out, "final rho_in={} rho_out={} max_tau={}", num(r.final_rho_in), num(r.final_rho_out), num(r.max_tau()));
    if via_interval {
        if let Some(v) = r.interval_rho_in {
            let _ = writeln!(out, "interval rho_in={} after n1={} (n1/n={})", num(v), r.n1, num(r.n1 as f64 / 2.0));
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}
