//! Reference integrator that evaluates `K(t) = ∫₀^∞ k(s) z(t − s) ds`
//! directly instead of through the linear chain.
//!
//! `K` is computed with the trapezoid rule over the stored grid values of
//! `z`, truncated at `s = 40/q`; lags reaching before `t = 0` use the exact
//! kernel mass times the constant history. Time stepping is Heun's method,
//! so the scheme is second order in `dt`. The cost grows with the product of
//! step count and window length; it is meant for short verification runs.

use super::{rhs, History, Recorder, SimConfig, Trajectory};
use crate::model::KernelSpec;
use crate::{Error, Result, Scalar};

/// Truncation horizon in units of `1/q`.
pub const HORIZON: f64 = 40.0;

pub fn simulate_integral<T: Scalar>(cfg: &SimConfig<T>) -> Result<Trajectory<T>> {
    cfg.validate()?;
    let (KernelSpec::Weak { q } | KernelSpec::Strong { q }) = cfg.kernel else {
        return Err(Error::InvalidSimConfig("the quadrature integrator needs a density kernel".into()));
    };
    if cfg.history != History::Constant {
        return Err(Error::InvalidSimConfig("the quadrature integrator supports constant history only".into()));
    }
    let p = &cfg.params;
    let dt = cfg.dt;
    let steps = cfg.step_count();
    let horizon = T::lit(HORIZON) / q;
    let window = (horizon / dt).ceil().to_usize().unwrap_or(usize::MAX).min(steps + 1);
    let weights: Vec<T> = (0..=window)
        .map(|j| cfg.kernel.density(dt * T::from_count(j)).expect("density kernel") * dt)
        .collect();
    let z_hist = cfg.initial[2];
    let half = T::lit(0.5);

    // Part of K(t_m) that does not involve node m itself.
    let partial = |z: &[T], m: usize| -> T {
        let reach = m.min(window);
        let mut acc = T::zero();
        for j in 1..=reach {
            let c = if j == reach { half } else { T::one() };
            acc += c * weights[j] * z[m - j];
        }
        if m <= window {
            let t = dt * T::from_count(m);
            acc += z_hist * (T::one() - cfg.kernel.cumulative(t).expect("density kernel"));
        }
        acc
    };
    // Trapezoid end weight of node m in K(t_m); at m = 0 the node is the
    // whole (degenerate) interval and only the history tail contributes.
    let own_weight = |m: usize| if m == 0 { T::zero() } else { half * weights[0] };

    let mut state = cfg.initial;
    let mut z = Vec::with_capacity(steps + 1);
    z.push(state[2]);
    let mut rec = Recorder::new(cfg, &state);
    let mut k = partial(&z, 0);
    for n in 0..steps {
        let f0 = rhs(p, state[0], state[1], k);
        let pred: [T; 3] = std::array::from_fn(|i| state[i] + dt * f0[i]);
        // Node n + 1 is not stored yet; `partial` never reads it.
        let base = partial(&z, n + 1);
        let k_pred = base + own_weight(n + 1) * pred[2];
        let f1 = rhs(p, pred[0], pred[1], k_pred);
        state = std::array::from_fn(|i| state[i] + dt * half * (f0[i] + f1[i]));
        rec.accept(n + 1, &mut state)?;
        k = base + own_weight(n + 1) * state[2];
        z.push(state[2]);
    }
    Ok(rec.finish(cfg, vec!["x", "y", "z"]))
}

#[cfg(test)]
mod tests {
    use super::super::tests::base;
    use super::super::*;
    use super::*;
    use crate::model::interior_equilibrium;

    #[test]
    fn equilibrium_is_stationary() {
        for kernel in [KernelSpec::Weak { q: 1.0 }, KernelSpec::Strong { q: 2.0 }] {
            let mut c = base(kernel);
            c.t_end = 20.0;
            c.stride = 100;
            let e = interior_equilibrium(&c.params).unwrap().state();
            let traj = simulate_integral(&c).unwrap();
            for row in &traj.states {
                for i in 0..3 {
                    // The trapezoid rule misses O(dt²) of the kernel mass.
                    assert!((row[i] - e[i]).abs() <= 1e-4 * e[i].max(1.0), "{row:?}");
                }
            }
        }
    }

    #[test]
    fn rejects_unsupported_setups() {
        let c = base(KernelSpec::Dirac { tau: 1.0 });
        assert!(simulate_integral(&c).is_err());
        let mut c = base(KernelSpec::Weak { q: 1.0 });
        c.history = History::Sampled { times: vec![-1.0, 0.0], values: vec![1.0, 1.0] };
        assert!(simulate_integral(&c).is_err());
    }
}
