//! CSV output. Floats carry 12 significant digits; nothing time-dependent
//! is written, so equal inputs give byte-identical files.

use std::io::Write;

use minksym_core::{Direction, StepRecord};

use crate::error::Result;

pub const STEP_COLUMNS: [&str; 9] = ["step", "phase", "direction", "rho_in", "rho_out", "mean_width", "raddist", "net", "tau"];

pub const SWEEP_COLUMNS: [&str; 17] = [
    "n",
    "eps",
    "seed",
    "status",
    "n1",
    "n2",
    "n3a",
    "n3b",
    "total",
    "budget_a",
    "budget_b",
    "final_rho_in",
    "final_rho_out",
    "max_tau",
    "warnings",
    "fit_slope",
    "fit_intercept",
];

pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// Planar directions as an angle in radians, others as space-separated coordinates.
pub fn direction(d: &Direction) -> String {
    if d.dim() == 2 {
        num(d.angle())
    } else {
        d.coords().iter().map(|&c| num(c)).collect::<Vec<_>>().join(" ")
    }
}

/// One row per record, then a `total` row with the final radii and the
/// largest τ of the run.
pub fn write_steps<W: Write>(out: W, records: &[StepRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STEP_COLUMNS)?;
    for r in records {
        w.write_record([
            r.step.to_string(),
            r.phase.label().to_string(),
            r.direction.as_ref().map(direction).unwrap_or_default(),
            num(r.rho_in),
            num(r.rho_out),
            num(r.mean_width),
            num(r.raddist),
            r.net.map(|b| b.to_string()).unwrap_or_default(),
            num(r.tau),
        ])?;
    }
    if let Some(last) = records.last() {
        let max_tau = records.iter().map(|r| r.tau).fold(0.0, f64::max);
        w.write_record([
            last.step.to_string(),
            "total".to_string(),
            String::new(),
            num(last.rho_in),
            num(last.rho_out),
            num(last.mean_width),
            num(last.raddist),
            last.net.map(|b| b.to_string()).unwrap_or_default(),
            num(max_tau),
        ])?;
    }
    w.flush().map_err(|e| csv::Error::from(e))?;
    Ok(())
}
