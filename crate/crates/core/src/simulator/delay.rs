use super::{rhs, Recorder, SimConfig, Trajectory};
use crate::model::KernelSpec;
use crate::{Result, Scalar};

/// Past values of `z` on the integration grid, kept for one delay window.
///
/// Node `j` (time `j·dt`) lives in slot `j mod len`. Derivatives are stored
/// alongside so that off-grid lookups can use cubic Hermite interpolation.
struct Lag<T> {
    z: Vec<T>,
    dz: Vec<T>,
}

impl<T: Scalar> Lag<T> {
    fn slot(&self, j: usize) -> usize {
        j % self.z.len()
    }
}

pub(super) fn simulate_discrete<T: Scalar>(cfg: &SimConfig<T>) -> Result<Trajectory<T>> {
    let KernelSpec::Dirac { tau } = cfg.kernel else {
        unreachable!("dispatched on the kernel kind")
    };
    let p = &cfg.params;
    let dt = cfg.effective_dt();
    let steps = cfg.step_count();
    let mut state = cfg.initial;
    let mut rec = Recorder::new(cfg, &state);
    let columns = vec!["x", "y", "z"];
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);

    if tau == T::zero() {
        let f = |s: [T; 3]| rhs(p, s[0], s[1], s[2]);
        for n in 1..=steps {
            state = rk4(state, dt, f, f, f, half, sixth);
            rec.accept(n, &mut state)?;
        }
        return Ok(rec.finish(cfg, columns));
    }

    let lag_steps = (tau / dt).round().to_usize().expect("validated delay");
    let z0 = state[2];
    let history = &cfg.history;
    let mut lag = Lag { z: vec![T::zero(); lag_steps + 1], dz: vec![T::zero(); lag_steps + 1] };

    // Delayed value at time `t_n − τ + (half_steps/2)·dt`, half_steps ∈ {0, 1, 2}.
    let delayed = |lag: &Lag<T>, n: usize, half_steps: usize| -> T {
        let pos = 2 * n + half_steps;
        if pos < 2 * lag_steps {
            let back = T::from_count(2 * lag_steps - pos) * dt * half;
            return history.value(-back, z0);
        }
        let j = (pos - 2 * lag_steps) / 2;
        if pos.is_multiple_of(2) {
            return lag.z[lag.slot(j)];
        }
        // Midpoint of the Hermite cubic between nodes j and j + 1.
        let (a, b) = (lag.slot(j), lag.slot(j + 1));
        (lag.z[a] + lag.z[b]) * half + (lag.dz[a] - lag.dz[b]) * dt / T::lit(8.0)
    };

    for n in 0..steps {
        let k_now = delayed(&lag, n, 0);
        let k_mid = delayed(&lag, n, 1);
        let k_next = delayed(&lag, n, 2);
        let f0 = rhs(p, state[0], state[1], k_now);
        let slot = lag.slot(n);
        lag.z[slot] = state[2];
        lag.dz[slot] = f0[2];
        state = rk4(
            state,
            dt,
            |_| f0,
            |s| rhs(p, s[0], s[1], k_mid),
            |s| rhs(p, s[0], s[1], k_next),
            half,
            sixth,
        );
        rec.accept(n + 1, &mut state)?;
    }
    Ok(rec.finish(cfg, columns))
}

/// One classical RK4 step where the three right-hand sides correspond to the
/// stage times `t`, `t + dt/2` and `t + dt`.
fn rk4<T: Scalar>(
    s: [T; 3],
    dt: T,
    f_start: impl Fn([T; 3]) -> [T; 3],
    f_mid: impl Fn([T; 3]) -> [T; 3],
    f_end: impl Fn([T; 3]) -> [T; 3],
    half: T,
    sixth: T,
) -> [T; 3] {
    let axpy = |a: [T; 3], k: [T; 3], h: T| [a[0] + k[0] * h, a[1] + k[1] * h, a[2] + k[2] * h];
    let k1 = f_start(s);
    let k2 = f_mid(axpy(s, k1, dt * half));
    let k3 = f_mid(axpy(s, k2, dt * half));
    let k4 = f_end(axpy(s, k3, dt));
    [0, 1, 2].map(|i| s[i] + dt * sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]))
}
