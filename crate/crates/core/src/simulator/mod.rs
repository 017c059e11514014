//! Fixed-step integration of the model.
//!
//! The Dirac kernel gives a discrete-delay system solved by the method of
//! steps; the weak and strong kernels are integrated through their
//! linear-chain equivalents with one or two auxiliary variables. A separate
//! [`quadrature`] integrator evaluates the kernel integral directly and serves
//! as a reference.

mod chain;
mod delay;
mod period;
pub mod quadrature;

pub use period::{estimate_period, period_of_samples, PeriodEstimate};

use crate::model::{validate_params, KernelSpec, ModelParams};
use crate::{Error, Result, Scalar};

/// States below this value count as a positivity violation rather than roundoff.
pub const CLAMP_THRESHOLD: f64 = -1e-12;

/// Magnitude above which a run is declared divergent.
pub const DIVERGENCE_BOUND: f64 = 1e12;

/// Pathogen density before the initial time.
#[derive(Debug, Clone, PartialEq)]
pub enum History<T> {
    /// `z(s) = z(0)` for all `s < 0`.
    Constant,
    /// Samples `z(times[i]) = values[i]`, linearly interpolated. Times
    /// ascend and end at `0`; before the first sample the first value is
    /// extended.
    Sampled { times: Vec<T>, values: Vec<T> },
}

impl<T: Scalar> History<T> {
    /// `z(s)` for `s ≤ 0`, with `z0` the initial pathogen density.
    pub fn value(&self, s: T, z0: T) -> T {
        match self {
            Self::Constant => z0,
            Self::Sampled { times, values } => {
                if s <= times[0] {
                    return values[0];
                }
                let last = times.len() - 1;
                if s >= times[last] {
                    return values[last];
                }
                let idx = times.partition_point(|&t| t <= s).max(1) - 1;
                let (t0, t1) = (times[idx], times[idx + 1]);
                let frac = (s - t0) / (t1 - t0);
                values[idx] + frac * (values[idx + 1] - values[idx])
            }
        }
    }

    /// `∫₀^∞ k(s) z(−s) ds` for a density kernel, integrating the kernel
    /// exactly against the piecewise-linear history.
    pub(crate) fn kernel_average(&self, kernel: &KernelSpec<T>, z0: T) -> T {
        let Self::Sampled { times, values } = self else {
            return z0;
        };
        let mass = |s: T| kernel.cumulative(s).expect("density kernel");
        let moment = |s: T| kernel.first_moment(s).expect("density kernel");
        let mut acc = T::zero();
        for i in (1..times.len()).rev() {
            // Segment in lag coordinates: s from −times[i] to −times[i−1].
            let (s0, s1) = (-times[i], -times[i - 1]);
            let (v0, v1) = (values[i], values[i - 1]);
            let slope = (v1 - v0) / (s1 - s0);
            let dm = mass(s1) - mass(s0);
            acc += v0 * dm + slope * (moment(s1) - moment(s0) - s0 * dm);
        }
        acc + values[0] * (T::one() - mass(-times[0]))
    }
}

/// Everything needed for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig<T> {
    pub params: ModelParams<T>,
    pub kernel: KernelSpec<T>,
    /// `(x, y, z)` at `t = 0`.
    pub initial: [T; 3],
    pub history: History<T>,
    pub t_end: T,
    pub dt: T,
    /// Keep every `stride`-th step in the output.
    pub stride: usize,
}

impl<T: Scalar> SimConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSimConfig(msg));
        let report = validate_params(&self.params);
        if !report.violations.is_empty() {
            let list: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidParams(list.join("; ")));
        }
        self.kernel.validate()?;
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return bad(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end >= T::zero()) || !self.t_end.is_finite() {
            return bad(format!("t_end = {} must be finite and nonnegative", self.t_end));
        }
        if self.stride == 0 {
            return bad("stride must be at least 1".into());
        }
        if self.initial.iter().any(|&v| !(v >= T::zero()) || !v.is_finite()) {
            return bad("initial densities must be finite and nonnegative".into());
        }
        if let KernelSpec::Dirac { tau } = self.kernel {
            if tau > T::zero() && self.dt > tau / T::lit(10.0) {
                return bad(format!("dt = {} exceeds tau/10 = {}", self.dt, tau / T::lit(10.0)));
            }
        }
        if let History::Sampled { times, values } = &self.history {
            if times.len() < 2 || times.len() != values.len() {
                return bad("sampled history needs at least two (time, value) pairs of equal length".into());
            }
            if times.windows(2).any(|w| !(w[1] > w[0])) {
                return bad("history times must be strictly increasing".into());
            }
            if times[times.len() - 1] != T::zero() {
                return bad("history must end at t = 0".into());
            }
            if values.iter().any(|&v| !(v >= T::zero()) || !v.is_finite()) {
                return bad("history values must be finite and nonnegative".into());
            }
            if let KernelSpec::Dirac { tau } = self.kernel {
                if times[0] > -tau {
                    return bad(format!("history must cover [-{tau}, 0]"));
                }
            }
        }
        Ok(())
    }

    /// Step actually taken: for a positive delay, the largest `τ/N ≤ dt`.
    pub fn effective_dt(&self) -> T {
        match self.kernel {
            KernelSpec::Dirac { tau } if tau > T::zero() => tau / (tau / self.dt).ceil(),
            _ => self.dt,
        }
    }

    /// Number of integration steps: the largest `n` with `n·dt_eff ≤ t_end`
    /// up to roundoff.
    pub fn step_count(&self) -> usize {
        let ratio = self.t_end / self.effective_dt();
        let n = (ratio + T::lit(1e-9) * ratio.max(T::one())).floor();
        n.to_usize().unwrap_or(0)
    }
}

/// Integrator bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimStats<T> {
    pub steps: usize,
    pub dt_effective: T,
    /// Times a component fell below [`CLAMP_THRESHOLD`] and was reset to 0.
    pub clamp_events: usize,
}

/// Sampled solution. Each row holds `(x, y, z)` followed by the chain
/// variables `u` (weak) or `u, v` (strong).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub columns: Vec<&'static str>,
    pub times: Vec<T>,
    pub states: Vec<Vec<T>>,
    pub stats: SimStats<T>,
    pub config: SimConfig<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn column(&self, name: &str) -> Option<Vec<T>> {
        let idx = self.columns.iter().position(|&c| c == name)?;
        Some(self.states.iter().map(|row| row[idx]).collect())
    }

    pub fn last(&self) -> &[T] {
        self.states.last().expect("a trajectory has at least the initial row")
    }
}

/// Integrates the configured system with the classical fourth-order scheme.
pub fn simulate<T: Scalar>(cfg: &SimConfig<T>) -> Result<Trajectory<T>> {
    cfg.validate()?;
    match cfg.kernel {
        KernelSpec::Dirac { .. } => delay::simulate_discrete(cfg),
        KernelSpec::Weak { .. } | KernelSpec::Strong { .. } => chain::simulate_chain(cfg),
    }
}

pub fn simulate_discrete<T: Scalar>(cfg: &SimConfig<T>) -> Result<Trajectory<T>> {
    expect_kind(cfg, matches!(cfg.kernel, KernelSpec::Dirac { .. }), "dirac")?;
    simulate(cfg)
}

pub fn simulate_weak<T: Scalar>(cfg: &SimConfig<T>) -> Result<Trajectory<T>> {
    expect_kind(cfg, matches!(cfg.kernel, KernelSpec::Weak { .. }), "weak")?;
    simulate(cfg)
}

pub fn simulate_strong<T: Scalar>(cfg: &SimConfig<T>) -> Result<Trajectory<T>> {
    expect_kind(cfg, matches!(cfg.kernel, KernelSpec::Strong { .. }), "strong")?;
    simulate(cfg)
}

fn expect_kind<T: Scalar>(cfg: &SimConfig<T>, ok: bool, want: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidSimConfig(format!("expected a {want} kernel, got {}", cfg.kernel.kind())))
    }
}

/// `(x', y', z')` for the current state and kernel-weighted pathogen `k`.
pub(crate) fn rhs<T: Scalar>(p: &ModelParams<T>, x: T, y: T, k: T) -> [T; 3] {
    let infection = p.a3 * x * k;
    [
        p.a1 - p.a2 * x - infection,
        -p.a4 * y + infection,
        p.a4 * p.a5 * y - p.a6 * k - p.a7 * x * k,
    ]
}

/// Accumulates output rows and enforces positivity and boundedness.
pub(crate) struct Recorder<T> {
    stride: usize,
    dt: T,
    times: Vec<T>,
    states: Vec<Vec<T>>,
    clamp_events: usize,
}

impl<T: Scalar> Recorder<T> {
    pub(crate) fn new(cfg: &SimConfig<T>, first: &[T]) -> Self {
        let rows = cfg.step_count() / cfg.stride + 1;
        let mut times = Vec::with_capacity(rows);
        let mut states = Vec::with_capacity(rows);
        times.push(T::zero());
        states.push(first.to_vec());
        Self { stride: cfg.stride, dt: cfg.effective_dt(), times, states, clamp_events: 0 }
    }

    /// Clamps small negatives, rejects non-finite or huge states, and stores
    /// the state reached after `step` steps when it falls on the stride.
    pub(crate) fn accept(&mut self, step: usize, state: &mut [T]) -> Result<()> {
        let t = self.dt * T::from_count(step);
        for (i, v) in state.iter_mut().enumerate() {
            if !v.is_finite() || v.abs() > T::lit(DIVERGENCE_BOUND) {
                let last = self.dt * T::from_count(step - 1);
                return Err(Error::Divergence { t_last_valid: last.to_f64().unwrap_or(f64::NAN) });
            }
            if *v < T::zero() {
                if *v < T::lit(CLAMP_THRESHOLD) {
                    self.clamp_events += 1;
                    if self.clamp_events == 1 {
                        log::warn!("component {i} fell to {v:e} at t = {t}; clamped to 0");
                    } else {
                        log::debug!("component {i} fell to {v:e} at t = {t}; clamped to 0");
                    }
                }
                *v = T::zero();
            }
        }
        if step.is_multiple_of(self.stride) {
            self.times.push(t);
            self.states.push(state.to_vec());
        }
        Ok(())
    }

    pub(crate) fn finish(self, cfg: &SimConfig<T>, columns: Vec<&'static str>) -> Trajectory<T> {
        Trajectory {
            columns,
            times: self.times,
            states: self.states,
            stats: SimStats { steps: cfg.step_count(), dt_effective: self.dt, clamp_events: self.clamp_events },
            config: cfg.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::interior_equilibrium;

    pub(crate) fn base(kernel: KernelSpec<f64>) -> SimConfig<f64> {
        let params = ModelParams::malaria_example();
        let e = interior_equilibrium(&params).unwrap();
        SimConfig {
            params,
            kernel,
            initial: e.state(),
            history: History::Constant,
            t_end: 10.0,
            dt: 0.01,
            stride: 1,
        }
    }

    #[test]
    fn validation() {
        let ok = base(KernelSpec::Dirac { tau: 1.0 });
        assert!(ok.validate().is_ok());
        let mut c = ok.clone();
        c.dt = 0.2;
        assert!(matches!(c.validate(), Err(Error::InvalidSimConfig(_))));
        let mut c = ok.clone();
        c.dt = 0.0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.stride = 0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.initial[1] = -1.0;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.history = History::Sampled { times: vec![-0.5, 0.0], values: vec![1.0, 1.0] };
        assert!(c.validate().is_err());
        c.history = History::Sampled { times: vec![-1.5, 0.0], values: vec![1.0, 1.0] };
        assert!(c.validate().is_ok());
        let mut c = ok.clone();
        c.kernel = KernelSpec::Weak { q: -1.0 };
        assert!(c.validate().is_err());
        let mut c = ok;
        c.params.a3 = f64::NAN;
        assert!(matches!(c.validate(), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn grid_alignment() {
        let mut c = base(KernelSpec::Dirac { tau: 0.8975 });
        c.dt = 0.01;
        let dt = c.effective_dt();
        assert!(dt <= 0.01);
        assert!(((0.8975 / dt).round() * dt - 0.8975).abs() < 1e-14);
        c.t_end = 1.0;
        c.kernel = KernelSpec::Weak { q: 1.0 };
        assert_eq!(c.step_count(), 100);
        c.stride = 7;
        let traj = simulate(&c).unwrap();
        assert_eq!(traj.states.len(), 100 / 7 + 1);
    }

    #[test]
    fn history_interpolation_and_average() {
        let h = History::Sampled { times: vec![-2.0, -1.0, 0.0], values: vec![4.0, 2.0, 0.0] };
        assert_eq!(h.value(-0.5, 9.0), 1.0);
        assert_eq!(h.value(-5.0, 9.0), 4.0);
        assert_eq!(History::Constant.value(-5.0, 9.0), 9.0);
        // A constant sampled history averages to itself.
        let flat = History::Sampled { times: vec![-3.0, -1.0, 0.0], values: vec![2.5; 3] };
        for kernel in [KernelSpec::Weak { q: 0.7 }, KernelSpec::Strong { q: 2.0 }] {
            assert!((flat.kernel_average(&kernel, 0.0_f64) - 2.5).abs() < 1e-12);
        }
        // Linear ramp z(s) = −s on [−2, 0], constant 2 before: exact weak average.
        let ramp = History::Sampled { times: vec![-2.0, 0.0], values: vec![2.0, 0.0] };
        let q: f64 = 1.5;
        let exact = (1.0 - (-2.0 * q).exp() * (1.0 + 2.0 * q)) / q + 2.0 * (-2.0 * q).exp();
        let got = ramp.kernel_average(&KernelSpec::Weak { q }, 0.0);
        assert!((got - exact).abs() < 1e-3, "{got} vs {exact}");
    }
}
