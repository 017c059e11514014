use super::{rhs, Recorder, SimConfig, Trajectory};
use crate::model::{KernelSpec, ModelParams};
use crate::{Result, Scalar};

pub(super) fn simulate_chain<T: Scalar>(cfg: &SimConfig<T>) -> Result<Trajectory<T>> {
    let z0 = cfg.initial[2];
    let [x, y, z] = cfg.initial;
    match cfg.kernel {
        KernelSpec::Weak { q } => {
            let u = cfg.history.kernel_average(&cfg.kernel, z0);
            run(cfg, [x, y, z, u], vec!["x", "y", "z", "u"], |p, s| weak_rhs(p, q, s))
        }
        KernelSpec::Strong { q } => {
            let u = cfg.history.kernel_average(&KernelSpec::Weak { q }, z0);
            let v = cfg.history.kernel_average(&cfg.kernel, z0);
            run(cfg, [x, y, z, u, v], vec!["x", "y", "z", "u", "v"], |p, s| strong_rhs(p, q, s))
        }
        KernelSpec::Dirac { .. } => unreachable!("dispatched on the kernel kind"),
    }
}

/// `u' = q(z − u)` feeds the model through `K = u`.
fn weak_rhs<T: Scalar>(p: &ModelParams<T>, q: T, s: [T; 4]) -> [T; 4] {
    let [dx, dy, dz] = rhs(p, s[0], s[1], s[3]);
    [dx, dy, dz, q * (s[2] - s[3])]
}

/// `u' = q(z − u)`, `v' = q(u − v)`, `K = v`.
fn strong_rhs<T: Scalar>(p: &ModelParams<T>, q: T, s: [T; 5]) -> [T; 5] {
    let [dx, dy, dz] = rhs(p, s[0], s[1], s[4]);
    [dx, dy, dz, q * (s[2] - s[3]), q * (s[3] - s[4])]
}

fn run<T: Scalar, const N: usize>(
    cfg: &SimConfig<T>,
    mut state: [T; N],
    columns: Vec<&'static str>,
    f: impl Fn(&ModelParams<T>, [T; N]) -> [T; N],
) -> Result<Trajectory<T>> {
    let dt = cfg.effective_dt();
    let p = &cfg.params;
    let mut rec = Recorder::new(cfg, &state);
    let half = dt / T::lit(2.0);
    let sixth = dt / T::lit(6.0);
    let axpy = |a: &[T; N], k: &[T; N], h: T| -> [T; N] { std::array::from_fn(|i| a[i] + k[i] * h) };
    for n in 1..=cfg.step_count() {
        let k1 = f(p, state);
        let k2 = f(p, axpy(&state, &k1, half));
        let k3 = f(p, axpy(&state, &k2, half));
        let k4 = f(p, axpy(&state, &k3, dt));
        state = std::array::from_fn(|i| state[i] + sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]));
        rec.accept(n, &mut state)?;
    }
    Ok(rec.finish(cfg, columns))
}

#[cfg(test)]
mod tests {
    use super::super::tests::base;
    use super::super::*;
    use crate::model::interior_equilibrium;

    #[test]
    fn chain_equilibrium_is_stationary() {
        for kernel in [KernelSpec::Weak { q: 0.5 }, KernelSpec::Strong { q: 2.0 }] {
            let mut c = base(kernel);
            c.t_end = 100.0;
            c.stride = 100;
            let e = interior_equilibrium(&c.params).unwrap().state();
            let traj = simulate(&c).unwrap();
            let width = if matches!(kernel, KernelSpec::Weak { .. }) { 4 } else { 5 };
            assert_eq!(traj.columns.len(), width);
            for row in &traj.states {
                assert_eq!(row.len(), width);
                for (i, v) in row.iter().enumerate() {
                    let want = e[i.min(2)];
                    assert!((v - want).abs() <= 1e-9 * want.max(1.0));
                }
            }
        }
    }

    #[test]
    fn kind_specific_entry_points() {
        let c = base(KernelSpec::Weak { q: 0.5 });
        assert!(simulate_weak(&c).is_ok());
        assert!(simulate_strong(&c).is_err());
        assert!(simulate_discrete(&c).is_err());
    }

    #[test]
    fn chain_starts_from_history_average() {
        let mut c = base(KernelSpec::Strong { q: 1.0 });
        c.t_end = 0.0;
        c.history = History::Sampled { times: vec![-50.0, 0.0], values: vec![1.0, 1.0] };
        let traj = simulate(&c).unwrap();
        let row = traj.last();
        assert!((row[3] - 1.0).abs() < 1e-12 && (row[4] - 1.0).abs() < 1e-12);
        assert_eq!(row[2], c.initial[2]);
    }
}
