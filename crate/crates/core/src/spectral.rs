//! Characteristic equation, stability tests and critical parameters.

use num_complex::Complex;

use crate::model::{CharCoeffs, KernelKind, KernelSpec};
use crate::{poly, Error, Result, Scalar};

/// Largest arctan branch index tried by [`find_tau0`].
pub const MAX_BRANCH: usize = 8;

/// Default upper end of the `q` interval scanned by [`find_q0`].
pub const DEFAULT_Q_MAX: f64 = 100.0;

/// A crossing of a root pair `±iω0` at a critical kernel parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfPoint<T> {
    /// Kernel evaluated at the critical parameter (`τ0` or `q0`).
    pub kernel: KernelSpec<T>,
    pub omega0: T,
    /// `dλ/dτ` or `dλ/dq` at `λ = iω0`.
    pub lambda_prime: Complex<T>,
    /// `|Δ(iω0)|` of the characteristic function at the critical parameter.
    pub residual: T,
}

impl<T: Scalar> HopfPoint<T> {
    pub fn kind(&self) -> KernelKind {
        self.kernel.kind()
    }

    pub fn critical(&self) -> T {
        self.kernel.parameter()
    }

    pub fn lambda1(&self) -> Complex<T> {
        Complex::new(T::zero(), self.omega0)
    }

    pub fn is_transversal(&self) -> bool {
        self.lambda_prime.re != T::zero()
    }
}

/// `Δ(λ) = λ³ + p2λ² + p1λ + (r2λ² + r1λ + r0)·κ(λ)`.
pub fn char_residual<T: Scalar>(
    c: &CharCoeffs<T>,
    kernel: &KernelSpec<T>,
    lambda: Complex<T>,
) -> Result<Complex<T>> {
    let kappa = kernel.transfer(lambda)?;
    Ok(c.undelayed_part(lambda) + c.delayed_part(lambda) * kappa)
}

/// Sum of the moduli of the terms of `Δ(λ)`, the natural scale for residuals.
fn char_scale<T: Scalar>(c: &CharCoeffs<T>, lambda: Complex<T>) -> T {
    let l = lambda.norm();
    let l2 = l * l;
    T::one() + l2 * l + c.p2.abs() * l2 + c.p1.abs() * l + c.r2.abs() * l2 + c.r1.abs() * l + c.r0.abs()
}

/// Routh–Hurwitz test for the undelayed cubic `λ³ + m2λ² + m1λ + m0`.
pub fn stability_tau_zero<T: Scalar>(c: &CharCoeffs<T>) -> bool {
    let (m2, m1, m0) = (c.m2(), c.m1(), c.m0());
    let zero = T::zero();
    m2 > zero && m1 > zero && m0 > zero && m1 * m2 - m0 > zero
}

/// Positive roots of `ω⁶ + n1ω⁴ + n2ω² + n3`, ascending.
pub fn find_omega0_discrete<T: Scalar>(c: &CharCoeffs<T>) -> Vec<T> {
    let (n1, n2, n3) = (c.n1(), c.n2(), c.n3());
    let sextic = [n3, T::zero(), n2, T::zero(), n1, T::zero(), T::one()];
    let mut out: Vec<T> = poly::cubic_real_roots(n1, n2, n3)
        .into_iter()
        .filter(|&y| y > T::zero())
        .map(|y| y.sqrt())
        .filter(|&w| {
            let w2 = w * w;
            let scale = T::one() + w2 * w2 * w2 + n1.abs() * w2 * w2 + n2.abs() * w2 + n3.abs();
            poly::eval(&sextic, w).abs() <= T::sqrt_eps() * scale
        })
        .collect();
    out.dedup();
    out
}

/// Critical delay for the crossing frequency `omega0`.
///
/// The arctan expression fixes `τ` only modulo `π/ω0`; branches
/// `j = 0..=MAX_BRANCH` are tried in order and the first nonnegative delay
/// whose characteristic residual is within tolerance is returned.
pub fn find_tau0<T: Scalar>(c: &CharCoeffs<T>, omega0: T) -> Result<HopfPoint<T>> {
    if !(omega0 > T::zero()) || !omega0.is_finite() {
        return Err(Error::NoHopfPoint(format!("crossing frequency {omega0} is not positive")));
    }
    let w = omega0;
    let w3 = w * w * w;
    let tail = c.r0 - c.r2 * w * w;
    let num = c.r1 * c.p2 * w3 - (w3 - w * c.p1) * tail;
    let den = c.p2 * w * w * tail + c.r1 * w * (w3 - w * c.p1);
    let base = (num / den).atan() / w;
    let step = T::PI() / w;
    let lambda = Complex::new(T::zero(), w);
    let tol = T::sqrt_eps() * char_scale(c, lambda);

    let mut best = T::infinity();
    for j in 0..=MAX_BRANCH {
        let tau = base + step * T::from_count(j);
        if tau < T::zero() {
            continue;
        }
        let kernel = KernelSpec::Dirac { tau };
        let residual = char_residual(c, &kernel, lambda)?.norm();
        if residual <= tol {
            return Ok(HopfPoint {
                kernel,
                omega0: w,
                lambda_prime: tau_derivative(c, lambda, tau),
                residual,
            });
        }
        best = best.min(residual);
    }
    Err(Error::BranchInconsistency {
        max_branch: MAX_BRANCH,
        best_residual: best.to_f64().unwrap_or(f64::NAN),
    })
}

/// `dλ/dτ = λQ / ((3λ² + 2p2λ + p1)e^{λτ} + 2r2λ + r1 − Qτ)` with
/// `Q = r2λ² + r1λ + r0`.
pub fn tau_derivative<T: Scalar>(c: &CharCoeffs<T>, lambda: Complex<T>, tau: T) -> Complex<T> {
    let two = T::lit(2.0);
    let q = c.delayed_part(lambda);
    let dp = (lambda * T::lit(3.0) + c.p2 * two) * lambda + c.p1;
    let den = dp * (lambda * tau).exp() + lambda * (c.r2 * two) + c.r1 - q * tau;
    lambda * q / den
}

/// Discrete-delay Hopf point with the smallest positive critical delay.
pub fn discrete_hopf<T: Scalar>(c: &CharCoeffs<T>) -> Result<HopfPoint<T>> {
    let omegas = find_omega0_discrete(c);
    if omegas.is_empty() {
        return Err(Error::NoHopfPoint("the frequency sextic has no positive root".into()));
    }
    let mut best: Option<HopfPoint<T>> = None;
    let mut last_err = None;
    for w in omegas {
        match find_tau0(c, w) {
            Ok(h) => {
                if best.is_none_or(|b| h.critical() < b.critical()) {
                    best = Some(h);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    match (best, last_err) {
        (Some(h), _) => Ok(h),
        (None, Some(e)) => Err(e),
        (None, None) => unreachable!("at least one frequency was tried"),
    }
}

/// Which quadratic in `q` decides weak-kernel stability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum D3Form {
    /// The closed form quoted with the weak-kernel stability result; its
    /// constant term is `p2(p1 − r0)`.
    #[default]
    Printed,
    /// The third Hurwitz determinant of the quartic divided by `q`; constant
    /// term `p2(p1(p1 + r1) − p2 r0)`.
    RouthHurwitz,
}

/// Coefficients `[d0, d1, d2]` of `D3(q) = d2 q² + d1 q + d0`.
pub fn d3_coefficients<T: Scalar>(c: &CharCoeffs<T>, form: D3Form) -> [T; 3] {
    let (m2, m1, r0) = (c.m2(), c.m1(), c.r0);
    let d2 = m1 * m2 - r0;
    let d1 = m1 * (c.p2 * m2 - c.r1) - T::lit(2.0) * c.p2 * r0;
    let d0 = match form {
        D3Form::Printed => c.p2 * (c.p1 - r0),
        D3Form::RouthHurwitz => c.p2 * (c.p1 * m1 - c.p2 * r0),
    };
    [d0, d1, d2]
}

/// Printed weak-kernel stability discriminant `D3(q)`.
pub fn hurwitz_d3<T: Scalar>(c: &CharCoeffs<T>, q: T) -> T {
    poly::eval(&d3_coefficients(c, D3Form::Printed), q)
}

/// `D3(q)` in the chosen form.
pub fn d3<T: Scalar>(c: &CharCoeffs<T>, form: D3Form, q: T) -> T {
    poly::eval(&d3_coefficients(c, form), q)
}

/// Ascending coefficients of the weak-kernel quartic
/// `λ⁴ + (p2+q)λ³ + (p1+q m2)λ² + q m1 λ + r0 q`.
pub fn weak_quartic<T: Scalar>(c: &CharCoeffs<T>, q: T) -> [T; 5] {
    [c.r0 * q, q * c.m1(), c.p1 + q * c.m2(), c.p2 + q, T::one()]
}

/// Evaluates the weak-kernel quartic at complex `λ`.
pub fn weak_quartic_at<T: Scalar>(c: &CharCoeffs<T>, q: T, lambda: Complex<T>) -> Complex<T> {
    weak_quartic(c, q)
        .iter()
        .rev()
        .fold(Complex::from(T::zero()), |acc, &k| acc * lambda + k)
}

/// Routh–Hurwitz test for the weak-kernel quartic.
pub fn weak_stable<T: Scalar>(c: &CharCoeffs<T>, q: T) -> bool {
    let [a0, a1, a2, a3, _] = weak_quartic(c, q);
    let zero = T::zero();
    let h2 = a3 * a2 - a1;
    let h3 = h2 * a1 - a3 * a3 * a0;
    a0 > zero && a1 > zero && a2 > zero && a3 > zero && h2 > zero && h3 > zero
}

/// Critical weak-kernel rate: the smallest positive root of `D3` on
/// `(0, q_max]`, located by a dyadic scan, refined by bisection and polished
/// by Newton steps.
pub fn find_q0<T: Scalar>(c: &CharCoeffs<T>, form: D3Form, q_max: T) -> Result<HopfPoint<T>> {
    if !(q_max > T::zero()) || !q_max.is_finite() {
        return Err(Error::InvalidKernel(format!("q_max = {q_max} must be positive")));
    }
    let coeffs = d3_coefficients(c, form);
    let f = |q: T| poly::eval(&coeffs, q);

    let mut grid: Vec<T> = (0..=52).map(|j| q_max * T::lit(0.5).powi(j)).collect();
    let fine = 1024;
    grid.extend((1..fine).map(|k| q_max * T::from_count(k) / T::from_count(fine)));
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();

    // The polynomial is defined at q = 0, so its value there serves as the
    // q → 0⁺ limit and the left end of the first bracket.
    let mut bracket = None;
    let mut prev = (T::zero(), coeffs[0]);
    for &q in &grid {
        let fq = f(q);
        if fq == T::zero() {
            bracket = Some((q, q));
            break;
        }
        if prev.1 != T::zero() && (prev.1 < T::zero()) != (fq < T::zero()) {
            bracket = Some((prev.0, q));
            break;
        }
        prev = (q, fq);
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| {
        Error::NoHopfPoint(format!("D3 does not change sign on (0, {q_max}]"))
    })?;

    let mut flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= T::epsilon() * hi {
            break;
        }
        let mid = (lo + hi) / T::lit(2.0);
        let fm = f(mid);
        if fm == T::zero() {
            lo = mid;
            hi = mid;
            break;
        }
        if (fm < T::zero()) == (flo < T::zero()) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let deriv = |q: T| T::lit(2.0) * coeffs[2] * q + coeffs[1];
    let mut q0 = (lo + hi) / T::lit(2.0);
    for _ in 0..3 {
        let d = deriv(q0);
        if d == T::zero() {
            break;
        }
        let next = q0 - f(q0) / d;
        if next > T::zero() && f(next).abs() <= f(q0).abs() {
            q0 = next;
        }
    }
    let slope = deriv(q0);
    let slope_scale = T::lit(2.0) * coeffs[2].abs() * q0 + coeffs[1].abs();
    if slope.abs() <= T::sqrt_eps() * slope_scale {
        return Err(Error::DegenerateCrossing(q0.to_f64().unwrap_or(f64::NAN)));
    }

    let quartic = weak_quartic(c, q0);
    if quartic.iter().any(|&k| !(k > T::zero())) {
        return Err(Error::NoHopfPoint(format!(
            "quartic coefficients are not all positive at q0 = {q0}"
        )));
    }

    let omega0 = (q0 * c.m1() / (c.p2 + q0)).sqrt();
    let lambda = Complex::new(T::zero(), omega0);
    let kernel = KernelSpec::Weak { q: q0 };
    let residual = char_residual(c, &kernel, lambda)?.norm();
    Ok(HopfPoint {
        kernel,
        omega0,
        lambda_prime: q_derivative(c, lambda, q0),
        residual,
    })
}

/// `dλ/dq` of a root of the weak-kernel quartic.
pub fn q_derivative<T: Scalar>(c: &CharCoeffs<T>, lambda: Complex<T>, q: T) -> Complex<T> {
    let l2 = lambda * lambda;
    let l3 = l2 * lambda;
    let num = l3 + l2 * c.m2() + lambda * c.m1() + c.r0;
    let den = l3 * T::lit(4.0)
        + l2 * (T::lit(3.0) * (c.p2 + q))
        + lambda * (T::lit(2.0) * (c.p1 + q * c.m2()))
        + q * c.m1();
    -num / den
}
