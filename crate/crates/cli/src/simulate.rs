//! `hopfkit simulate`: one trajectory to CSV plus a sidecar with the
//! effective config.

use std::path::{Path, PathBuf};

use hopfkit_core::simulator::simulate as integrate;
use hopfkit_core::Scalar;
use serde::Serialize;

use crate::config::{KernelConfig, Precision};
use crate::output::{write_sidecar, write_trajectory};
use crate::{CliError, RunConfig};

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    /// Switches to the Dirac kernel with this delay.
    pub tau: Option<f64>,
    /// Sets the rate of a weak or strong kernel; a Dirac kernel becomes weak.
    pub q: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, config: &RunConfig) -> Result<RunConfig, CliError> {
        let mut out = config.clone();
        match (self.tau, self.q) {
            (Some(_), Some(_)) => return Err(CliError::Config("--tau and --q are exclusive".into())),
            (Some(tau), None) => out.kernel = Some(KernelConfig::Dirac { tau }),
            (None, Some(q)) => {
                out.kernel = Some(match config.kernel {
                    Some(KernelConfig::Strong { .. }) => KernelConfig::Strong { q },
                    _ => KernelConfig::Weak { q },
                })
            }
            (None, None) => {}
        }
        if let Some(t_end) = self.t_end {
            out.sim.t_end = t_end;
        }
        if let Some(dt) = self.dt {
            out.sim.dt = dt;
        }
        out.resolved()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunInfo {
    pub output: String,
    pub columns: Vec<String>,
    pub rows: usize,
    pub steps: usize,
    pub dt_effective: f64,
    pub clamp_events: usize,
}

/// Integrates `config` (already resolved) and writes `out` and its sidecar.
pub fn run(config: &RunConfig, out: &Path) -> Result<(RunInfo, PathBuf), CliError> {
    let info = match config.precision {
        Precision::F64 => run_as::<f64>(config, out)?,
        Precision::F32 => run_as::<f32>(config, out)?,
    };
    let sidecar = write_sidecar(out, config, &info)?;
    Ok((info, sidecar))
}

fn run_as<T: Scalar>(config: &RunConfig, out: &Path) -> Result<RunInfo, CliError> {
    let cfg = config.sim_config::<T>()?;
    let traj = integrate(&cfg)?;
    if traj.stats.clamp_events > 0 {
        log::warn!("{} negative densities were clamped to zero", traj.stats.clamp_events);
    }
    write_trajectory(out, &traj)?;
    let mut columns = vec!["t".to_string()];
    columns.extend(traj.columns.iter().map(|c| c.to_string()));
    Ok(RunInfo {
        output: out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
        columns,
        rows: traj.times.len(),
        steps: traj.stats.steps,
        dt_effective: traj.stats.dt_effective.to_f64().unwrap_or(f64::NAN),
        clamp_events: traj.stats.clamp_events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> RunConfig {
        RunConfig::parse(r#"{"a": [2, 0.02, 0.5, 2, 1.5, 0.03, 0.5], "kernel": {"type": "strong", "q": 1}}"#)
            .unwrap()
    }

    #[test]
    fn overrides() {
        let c = Overrides { q: Some(3.0), t_end: Some(5.0), ..Default::default() }.apply(&base()).unwrap();
        assert_eq!(c.kernel, Some(KernelConfig::Strong { q: 3.0 }));
        assert_eq!(c.sim.t_end, 5.0);
        assert!(c.initial.is_some());
        let c = Overrides { tau: Some(0.5), dt: Some(0.01), ..Default::default() }.apply(&base()).unwrap();
        assert_eq!(c.kernel, Some(KernelConfig::Dirac { tau: 0.5 }));
        let both = Overrides { tau: Some(0.5), q: Some(1.0), ..Default::default() };
        assert_eq!(both.apply(&base()).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn dirac_becomes_weak_under_q() {
        let mut c = base();
        c.kernel = Some(KernelConfig::Dirac { tau: 1.0 });
        let c = Overrides { q: Some(2.0), ..Default::default() }.apply(&c).unwrap();
        assert_eq!(c.kernel, Some(KernelConfig::Weak { q: 2.0 }));
    }
}
