//! Run configuration: a JSON document with the model rates, the kernel, the
//! integration settings and the history.
//!
//! ```json
//! {
//!   "a": [2, 0.02, 0.5, 2, 1.5, 0.03, 0.5],
//!   "kernel": {"type": "dirac", "tau": 0.9},
//!   "sim": {"t_end": 600, "dt": 0.01, "stride": 1},
//!   "history": {"type": "constant"}
//! }
//! ```
//!
//! Optional keys: `initial` (`[x, y, z]` at `t = 0`; default is the interior
//! equilibrium with `z` raised by 1%), `linearization` (`"published"` or
//! `"jacobian"`) and `precision` (`"f64"` or `"f32"`). A top-level `run`
//! object is ignored, so a sidecar written by `simulate` parses as a config.

use std::path::Path;

use hopfkit_core::model::{interior_equilibrium, ModelParams};
use hopfkit_core::simulator::{History, SimConfig};
use hopfkit_core::{Convention, KernelSpec, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Relative bump applied to `z` of the interior equilibrium when no
/// `initial` state is configured.
pub const DEFAULT_PERTURBATION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub a: [f64; 7],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelConfig>,
    #[serde(default)]
    pub sim: SimSettings,
    #[serde(default)]
    pub history: HistoryConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<[f64; 3]>,
    #[serde(default)]
    pub linearization: Linearization,
    #[serde(default)]
    pub precision: Precision,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum KernelConfig {
    Dirac { tau: f64 },
    Weak { q: f64 },
    Strong { q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSettings {
    pub t_end: f64,
    pub dt: f64,
    pub stride: usize,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self { t_end: 600.0, dt: 0.01, stride: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum HistoryConfig {
    #[default]
    Constant,
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linearization {
    #[default]
    Published,
    Jacobian,
}

impl std::fmt::Display for Linearization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Convention::from(*self).fmt(f)
    }
}

impl From<Linearization> for Convention {
    fn from(l: Linearization) -> Self {
        match l {
            Linearization::Published => Convention::Published,
            Linearization::Jacobian => Convention::Jacobian,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    F64,
    F32,
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::F64 => "f64",
            Self::F32 => "f32",
        })
    }
}

impl KernelConfig {
    pub fn to_spec<T: Scalar>(self) -> KernelSpec<T> {
        match self {
            Self::Dirac { tau } => KernelSpec::Dirac { tau: T::lit(tau) },
            Self::Weak { q } => KernelSpec::Weak { q: T::lit(q) },
            Self::Strong { q } => KernelSpec::Strong { q: T::lit(q) },
        }
    }
}

impl RunConfig {
    /// Reads and parses a config file. Errors map to exit code 2.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if let Some(obj) = value.as_object_mut() {
            obj.remove("run");
        }
        serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn params<T: Scalar>(&self) -> ModelParams<T> {
        ModelParams::from_array(self.a.map(T::lit))
    }

    pub fn convention(&self) -> Convention {
        self.linearization.into()
    }

    /// The configured initial state, or the perturbed interior equilibrium.
    pub fn initial_state(&self) -> Result<[f64; 3], CliError> {
        if let Some(s) = self.initial {
            return Ok(s);
        }
        let e = interior_equilibrium(&self.params::<f64>())?;
        Ok([e.x, e.y, e.z * (1.0 + DEFAULT_PERTURBATION)])
    }

    /// Copy with every default made explicit, as echoed in sidecars.
    pub fn resolved(&self) -> Result<Self, CliError> {
        let mut out = self.clone();
        out.initial = Some(self.initial_state()?);
        Ok(out)
    }

    /// Builds and validates the simulator input for scalar type `T`.
    pub fn sim_config<T: Scalar>(&self) -> Result<SimConfig<T>, CliError> {
        let kernel = self.kernel.ok_or_else(|| CliError::Config("missing \"kernel\"".into()))?;
        let history = match &self.history {
            HistoryConfig::Constant => History::Constant,
            HistoryConfig::Sampled { times, values } => History::Sampled {
                times: times.iter().map(|&t| T::lit(t)).collect(),
                values: values.iter().map(|&v| T::lit(v)).collect(),
            },
        };
        if !self.a.iter().chain(&[self.sim.t_end, self.sim.dt]).all(|v| v.is_finite()) {
            return Err(CliError::Config("non-finite number in \"a\" or \"sim\"".into()));
        }
        let cfg = SimConfig {
            params: self.params(),
            kernel: kernel.to_spec(),
            initial: self.initial_state()?.map(T::lit),
            history,
            t_end: T::lit(self.sim.t_end),
            dt: T::lit(self.sim.dt),
            stride: self.sim.stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
