//! `hopfkit sweep`: simulate over a grid of `τ` or `q` values and record the
//! post-transient amplitude and period of `z`.

use std::path::Path;

use hopfkit_core::simulator::{estimate_period, simulate as integrate};
use hopfkit_core::{Error, Scalar};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Precision;
use crate::output::{write_sidecar, write_table};
use crate::simulate::Overrides;
use crate::{CliError, RunConfig};

/// Environment variable bounding the number of worker threads.
pub const THREADS_VAR: &str = "HOPFKIT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Tau,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl Grid {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.from.is_finite() && self.to.is_finite() && self.from < self.to) {
            return Err(CliError::Config(format!("sweep needs from < to, got {} .. {}", self.from, self.to)));
        }
        if self.steps < 2 {
            return Err(CliError::Config(format!("sweep needs at least 2 steps, got {}", self.steps)));
        }
        Ok(())
    }

    /// `steps` evenly spaced values including both ends.
    pub fn points(&self) -> Vec<f64> {
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.to } else { self.from + h * i as f64 })
            .collect()
    }

    fn overrides(&self, value: f64) -> Overrides {
        match self.param {
            SweepParam::Tau => Overrides { tau: Some(value), ..Default::default() },
            SweepParam::Q => Overrides { q: Some(value), ..Default::default() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    /// Mean half range of the `z` oscillation over the second half of the
    /// run; 0 when it has settled.
    pub amplitude: f64,
    /// NaN when there is no sustained oscillation.
    pub period: f64,
}

/// Worker count from [`THREADS_VAR`], defaulting to the processor count.
pub fn thread_count() -> usize {
    let default = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var(THREADS_VAR) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                log::warn!("ignoring {THREADS_VAR}={v:?}; using {default} threads");
                default
            }
        },
        Err(_) => default,
    }
}

/// Runs the sweep and writes `out` (`param,amplitude,period`) and its sidecar.
pub fn run(config: &RunConfig, grid: &Grid, out: &Path) -> Result<Vec<SweepRow>, CliError> {
    grid.validate()?;
    let points = grid.points();
    // Catch config problems once, before fanning out.
    let configs: Vec<RunConfig> =
        points.iter().map(|&v| grid.overrides(v).apply(config)).collect::<Result<_, _>>()?;
    for c in &configs {
        c.sim_config::<f64>()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker threads: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        configs
            .par_iter()
            .zip(points.par_iter())
            .map(|(c, &value)| match c.precision {
                Precision::F64 => point::<f64>(c, value),
                Precision::F32 => point::<f32>(c, value),
            })
            .collect::<Result<_, _>>()
    })?;
    let table: Vec<[f64; 3]> = rows.iter().map(|r| [r.param, r.amplitude, r.period]).collect();
    write_table(out, &["param", "amplitude", "period"], table.iter().map(|r| r.as_slice()))?;
    let effective = config.resolved()?;
    write_sidecar(out, &effective, serde_json::json!({ "sweep": grid }))?;
    Ok(rows)
}

fn point<T: Scalar>(config: &RunConfig, value: f64) -> Result<SweepRow, CliError> {
    let cfg = config.sim_config::<T>()?;
    let traj = match integrate(&cfg) {
        Ok(t) => t,
        Err(Error::Divergence { t_last_valid }) => {
            log::warn!("run at {value} diverged after t = {t_last_valid}");
            return Ok(SweepRow { param: value, amplitude: f64::NAN, period: f64::NAN });
        }
        Err(e) => return Err(e.into()),
    };
    Ok(match estimate_period(&traj, "z") {
        Some(est) => SweepRow {
            param: value,
            amplitude: est.amplitude.to_f64().unwrap_or(f64::NAN),
            period: est.period.to_f64().unwrap_or(f64::NAN),
        },
        None => SweepRow { param: value, amplitude: 0.0, period: f64::NAN },
    })
}
