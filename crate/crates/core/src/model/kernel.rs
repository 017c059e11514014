use num_complex::Complex;

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Dirac,
    Weak,
    Strong,
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Dirac => "dirac",
            Self::Weak => "weak",
            Self::Strong => "strong",
        })
    }
}

/// Memory kernel `k` on `[0, ∞)` with unit mass.
///
/// * `Dirac { tau }`: `k(s) = δ(s − τ)`, a single discrete lag.
/// * `Weak { q }`: `k(s) = q e^{−qs}`.
/// * `Strong { q }`: `k(s) = q² s e^{−qs}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec<T> {
    Dirac { tau: T },
    Weak { q: T },
    Strong { q: T },
}

impl<T: Scalar> KernelSpec<T> {
    pub fn kind(&self) -> KernelKind {
        match self {
            Self::Dirac { .. } => KernelKind::Dirac,
            Self::Weak { .. } => KernelKind::Weak,
            Self::Strong { .. } => KernelKind::Strong,
        }
    }

    /// The kernel's parameter: `τ` for Dirac, `q` otherwise.
    pub fn parameter(&self) -> T {
        match *self {
            Self::Dirac { tau } => tau,
            Self::Weak { q } | Self::Strong { q } => q,
        }
    }

    /// Same kind of kernel with a different parameter.
    pub fn with_parameter(&self, value: T) -> Self {
        match self {
            Self::Dirac { .. } => Self::Dirac { tau: value },
            Self::Weak { .. } => Self::Weak { q: value },
            Self::Strong { .. } => Self::Strong { q: value },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Dirac { tau } if !(tau.is_finite() && tau >= T::zero()) => {
                Err(Error::InvalidKernel(format!("tau must be finite and >= 0, got {tau}")))
            }
            Self::Weak { q } | Self::Strong { q } if !(q.is_finite() && q > T::zero()) => {
                Err(Error::InvalidKernel(format!("q must be finite and > 0, got {q}")))
            }
            _ => Ok(()),
        }
    }

    fn check_pole(&self, lambda: Complex<T>) -> Result<()> {
        if let Self::Weak { q } | Self::Strong { q } = *self {
            if (lambda + q).norm() <= T::epsilon() * q.max(T::one()) {
                return Err(Error::KernelPole {
                    re: lambda.re.to_f64().unwrap_or(f64::NAN),
                    im: lambda.im.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// `κ(λ) = ∫₀^∞ k(s) e^{−λs} ds`, continued analytically off its abscissa
    /// of convergence. `κ(0) = 1` for every variant.
    pub fn transfer(&self, lambda: Complex<T>) -> Result<Complex<T>> {
        self.check_pole(lambda)?;
        Ok(match *self {
            Self::Dirac { tau } => (-lambda * tau).exp(),
            Self::Weak { q } => Complex::from(q) / (lambda + q),
            Self::Strong { q } => {
                let r = Complex::from(q) / (lambda + q);
                r * r
            }
        })
    }

    /// `κ'(λ) = −∫₀^∞ s k(s) e^{−λs} ds`.
    pub fn transfer_derivative(&self, lambda: Complex<T>) -> Result<Complex<T>> {
        self.check_pole(lambda)?;
        Ok(match *self {
            Self::Dirac { tau } => -(-lambda * tau).exp() * tau,
            Self::Weak { q } => {
                let d = lambda + q;
                -Complex::from(q) / (d * d)
            }
            Self::Strong { q } => {
                let d = lambda + q;
                -Complex::from(T::lit(2.0) * q * q) / (d * d * d)
            }
        })
    }

    /// `(κ(a) − κ(b)) / (a − b)`, with the limit `κ'(a)` when `a = b`,
    /// evaluated without cancellation.
    pub fn divided_difference(&self, a: Complex<T>, b: Complex<T>) -> Result<Complex<T>> {
        self.check_pole(a)?;
        self.check_pole(b)?;
        Ok(match *self {
            Self::Dirac { tau } => {
                // e^{-bτ} = e^{-aτ} e^{(a-b)τ}
                -(-a * tau).exp() * tau * exprel((a - b) * tau)
            }
            Self::Weak { q } => -Complex::from(q) / ((a + q) * (b + q)),
            Self::Strong { q } => {
                let (da, db) = (a + q, b + q);
                -Complex::from(q * q) * (da + db) / (da * da * db * db)
            }
        })
    }

    /// Density `k(s)` for `s ≥ 0`; `None` for the Dirac kernel.
    pub fn density(&self, s: T) -> Option<T> {
        match *self {
            Self::Dirac { .. } => None,
            Self::Weak { q } => Some(q * (-q * s).exp()),
            Self::Strong { q } => Some(q * q * s * (-q * s).exp()),
        }
    }

    /// `∫₀^s k(u) du`; `None` for the Dirac kernel.
    pub fn cumulative(&self, s: T) -> Option<T> {
        match *self {
            Self::Dirac { .. } => None,
            Self::Weak { q } => Some(-(-q * s).exp_m1()),
            Self::Strong { q } => Some(-(-q * s).exp_m1() - q * s * (-q * s).exp()),
        }
    }

    /// `∫₀^s u k(u) du`; `None` for the Dirac kernel.
    pub fn first_moment(&self, s: T) -> Option<T> {
        let decay = |q: T| (-q * s).exp();
        match *self {
            Self::Dirac { .. } => None,
            Self::Weak { q } => Some((T::one() - decay(q) * (T::one() + q * s)) / q),
            Self::Strong { q } => {
                let qs = q * s;
                let two = T::lit(2.0);
                Some((two - decay(q) * (qs * qs + two * qs + two)) / q)
            }
        }
    }
}

/// `(eˣ − 1)/x` for complex `x`.
fn exprel<T: Scalar>(x: Complex<T>) -> Complex<T> {
    if x.norm() < T::lit(1e-2) {
        // Horner form of 1 + x/2! + x²/3! + … + x⁶/7!
        let mut acc = Complex::from(T::one());
        for n in (2..=7).rev() {
            acc = Complex::from(T::one()) + x * acc / T::from_count(n);
        }
        acc
    } else {
        (x.exp() - T::one()) / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn kernels() -> [KernelSpec<f64>; 3] {
        [
            KernelSpec::Dirac { tau: 0.9 },
            KernelSpec::Weak { q: 0.7 },
            KernelSpec::Strong { q: 1.3 },
        ]
    }

    #[test]
    fn unit_mass() {
        for k in kernels() {
            assert!((k.transfer(c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
            if let Some(total) = k.cumulative(1e3) {
                assert!((total - 1.0).abs() < 1e-15);
            }
        }
        // Midpoint rule on the densities as an independent check.
        for k in &kernels()[1..] {
            let h = 1e-3;
            let mass: f64 = (0..100_000).map(|i| k.density((i as f64 + 0.5) * h).unwrap() * h).sum();
            assert!((mass - 1.0).abs() < 1e-6, "{k:?}: {mass}");
        }
    }

    #[test]
    fn partial_moments_match_midpoint_rule() {
        for k in &kernels()[1..] {
            let (h, upto) = (1e-4, 3.0);
            let n = (upto / h) as usize;
            let (mut mass, mut first) = (0.0, 0.0);
            for i in 0..n {
                let s = (i as f64 + 0.5) * h;
                mass += k.density(s).unwrap() * h;
                first += s * k.density(s).unwrap() * h;
            }
            assert!((mass - k.cumulative(upto).unwrap()).abs() < 1e-8);
            assert!((first - k.first_moment(upto).unwrap()).abs() < 1e-8);
        }
        // Total first moments: mean delays 1/q and 2/q.
        assert!((KernelSpec::Weak { q: 0.5_f64 }.first_moment(1e4).unwrap() - 2.0).abs() < 1e-12);
        assert!((KernelSpec::Strong { q: 0.5_f64 }.first_moment(1e4).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(KernelSpec::Dirac { tau: 1.0_f64 }.first_moment(1.0), None);
    }

    #[test]
    fn transfer_matches_direct_laplace_integral() {
        let lambda = c(0.3, 1.1);
        for k in &kernels()[1..] {
            let h = 1e-3;
            let direct: Complex<f64> = (0..100_000)
                .map(|i| {
                    let s = (i as f64 + 0.5) * h;
                    (-lambda * s).exp() * k.density(s).unwrap() * h
                })
                .sum();
            assert!((direct - k.transfer(lambda).unwrap()).norm() < 1e-6);
        }
    }

    #[test]
    fn derivative_and_divided_difference_agree_with_finite_differences() {
        let a = c(0.05, 1.14);
        for k in kernels() {
            let h = 1e-6;
            let fd = (k.transfer(a + h).unwrap() - k.transfer(a - h).unwrap()) / (2.0 * h);
            let exact = k.transfer_derivative(a).unwrap();
            assert!((fd - exact).norm() < 1e-8 * (1.0 + exact.norm()));
            assert!((k.divided_difference(a, a).unwrap() - exact).norm() < 1e-14);
            let b = c(-0.4, 2.0);
            let dd = (k.transfer(a).unwrap() - k.transfer(b).unwrap()) / (a - b);
            assert!((k.divided_difference(a, b).unwrap() - dd).norm() < 1e-13);
            let near = a + c(1e-9, -2e-9);
            let dd_near = k.divided_difference(a, near).unwrap();
            assert!((dd_near - exact).norm() < 1e-7);
        }
    }

    #[test]
    fn pole_is_an_error() {
        let k = KernelSpec::Weak { q: 2.0 };
        assert!(matches!(k.transfer(c(-2.0, 0.0)), Err(Error::KernelPole { .. })));
        assert!(KernelSpec::Strong { q: 2.0 }.transfer_derivative(c(-2.0, 0.0)).is_err());
        assert!(KernelSpec::Dirac { tau: 1.0 }.transfer(c(-2.0, 0.0)).is_ok());
    }

    #[test]
    fn validation() {
        assert!(KernelSpec::Dirac { tau: 0.0 }.validate().is_ok());
        assert!(KernelSpec::Dirac { tau: -1.0 }.validate().is_err());
        assert!(KernelSpec::Weak { q: 0.0 }.validate().is_err());
        assert!(KernelSpec::Strong { q: f64::NAN }.validate().is_err());
    }
}
