//! Center-manifold reduction at a Hopf point and the coefficients that
//! classify the bifurcating cycle.
//!
//! With `φ(θ) = v e^{λ1 θ}` the critical eigenfunction and `ψ(s) = w e^{σ s}`
//! its adjoint, the flow on the center manifold reads
//! `ż = λ1 z + g20 z²/2 + g11 z z̄ + g02 z̄²/2 + g21 z² z̄/2 + …`.

use num_complex::Complex;

use crate::linalg::{self, CVec3};
use crate::model::{KernelSpec, LinearData};
use crate::spectral::HopfPoint;
use crate::{Error, Result, Scalar};

/// Condition estimate above which an E-system is treated as resonant.
pub const RESONANCE_CONDITION: f64 = 1e12;

/// Relative size below which the adjoint normalizer counts as zero.
pub const NORMALIZATION_FLOOR: f64 = 1e-12;

/// Which set of closed forms drives the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NormalFormVariant {
    /// Standard center-manifold procedure: `ψ(s) = w e^{λ1 s}` normalized
    /// with `κ'(λ1)`, second-order terms taken from the quadratic part of the
    /// nonlinearity.
    #[default]
    Derived,
    /// The closed forms exactly as quoted with the reduction: `ψ(s) = w e^{λ2 s}`,
    /// normalizer built with `k^(−1)`, `g11` with the factor `(k1 + k^(−1))`,
    /// `w20`, `w11` with `g/λ1` coefficients and the E right-hand sides along
    /// `(1, −1, −b9/b3²)`.
    Printed,
}

impl std::fmt::Display for NormalFormVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Derived => "derived",
            Self::Printed => "printed",
        })
    }
}

/// Kernel transforms at the critical frequency:
/// `k1 = κ(λ1)`, `k_neg1 = κ(λ̄1)`, `k2 = κ(2λ1)` and `dk1 = κ'(λ1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelMoments<T> {
    pub k1: Complex<T>,
    pub k_neg1: Complex<T>,
    pub k2: Complex<T>,
    pub dk1: Complex<T>,
}

pub fn kernel_moments<T: Scalar>(kernel: &KernelSpec<T>, omega0: T) -> Result<KernelMoments<T>> {
    let l1 = Complex::new(T::zero(), omega0);
    Ok(KernelMoments {
        k1: kernel.transfer(l1)?,
        k_neg1: kernel.transfer(l1.conj())?,
        k2: kernel.transfer(l1 * T::lit(2.0))?,
        dk1: kernel.transfer_derivative(l1)?,
    })
}

/// `v` with `(L + k1 B − λ1 I) v = 0`.
pub fn eigenvector_v<T: Scalar>(lin: &LinearData<T>, m: &KernelMoments<T>, omega0: T) -> CVec3<T> {
    let l1 = Complex::new(T::zero(), omega0);
    let [b1, b2, _, b4, b5, ..] = lin.b;
    [
        -(l1 + b5) * m.k1 * b2,
        (l1 + b1 - b4) * m.k1 * b2,
        (l1 + b1) * (l1 + b5),
    ]
}

/// Adjoint eigenvector and its normalizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adjoint<T> {
    /// `ψ(s) = w e^{rate·s}`.
    pub w: CVec3<T>,
    pub rate: Complex<T>,
    pub eta: Complex<T>,
}

impl<T: Scalar> Adjoint<T> {
    pub fn w_bar(&self) -> CVec3<T> {
        linalg::conj(&self.w)
    }
}

/// Row vector `(A, 1, C)` annihilating `λ I − L − κB` from the left, built
/// from its first and third columns.
fn left_null_row<T: Scalar>(lin: &LinearData<T>, lambda: Complex<T>) -> CVec3<T> {
    let [b1, _, _, b4, b5, b6, b7, ..] = lin.b;
    let a = (-(lambda + b5) * b6 + b4 * b7) / ((lambda + b1) * b7);
    let c = (lambda + b5) / b7;
    [a, Complex::from(T::one()), c]
}

pub fn adjoint_w<T: Scalar>(
    lin: &LinearData<T>,
    m: &KernelMoments<T>,
    v: &CVec3<T>,
    omega0: T,
    variant: NormalFormVariant,
) -> Result<Adjoint<T>> {
    let l1 = Complex::new(T::zero(), omega0);
    let l2 = l1.conj();
    match variant {
        NormalFormVariant::Derived => {
            let u = left_null_row(lin, l1);
            let bv = linalg::mat_vec(&lin.b_complex(), v);
            let eta = linalg::dot(&u, v) - m.dk1 * linalg::dot(&u, &bv);
            check_normalizer(eta, linalg::norm(&u) * linalg::norm(v))?;
            // w̄ = u / η.
            let w = linalg::conj(&linalg::scale(&u, eta.inv()));
            Ok(Adjoint { w, rate: l1, eta })
        }
        NormalFormVariant::Printed => {
            let [_, b2, _, _, _, _, _, b8, _] = lin.b;
            let [a, one, c] = left_null_row(lin, l2);
            let vb = linalg::conj(v);
            let eta = a * vb[0] + vb[1] + (c - (-a * b2 + b2 - c * b8) * m.k_neg1) * vb[2];
            check_normalizer(eta, linalg::norm(&[a, one, c]) * linalg::norm(v))?;
            let inv = eta.inv();
            Ok(Adjoint { w: [a * inv, inv, c * inv], rate: l2, eta })
        }
    }
}

fn check_normalizer<T: Scalar>(eta: Complex<T>, scale: T) -> Result<()> {
    if !(eta.norm() > T::lit(NORMALIZATION_FLOOR) * scale) {
        return Err(Error::DegenerateNormalization(eta.norm().to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// `vector · e^{rate·t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpFn<T> {
    pub vector: CVec3<T>,
    pub rate: Complex<T>,
}

/// `⟨ψ, φ⟩ = ψ̄(0)ᵀφ(0) − ∫_{−∞}^0 ∫_0^θ ψ̄ᵀ(ξ − θ) F(θ) φ(ξ) dξ dθ` for
/// `φ(θ) = v e^{λθ}` and `ψ(s) = w e^{σs}`, where `F` carries the kernel
/// weight on the third column of `B`.
///
/// In closed form this is `w̄ᵀv − D(λ, −σ̄)·w̄ᵀBv` with `D` the divided
/// difference of the kernel transform.
pub fn bilinear_pairing<T: Scalar>(
    psi: &ExpFn<T>,
    phi: &ExpFn<T>,
    lin: &LinearData<T>,
    kernel: &KernelSpec<T>,
) -> Result<Complex<T>> {
    let lambda = phi.rate;
    let shifted = -psi.rate.conj();
    if let KernelSpec::Weak { q } | KernelSpec::Strong { q } = *kernel {
        if !(lambda.re > -q) || !(shifted.re > -q) {
            return Err(Error::DivergentPairing(format!(
                "exponents {lambda} and {} must have real part above −q = {}",
                psi.rate,
                -q
            )));
        }
    }
    let w_bar = linalg::conj(&psi.vector);
    let bv = linalg::mat_vec(&lin.b_complex(), &phi.vector);
    let dd = kernel.divided_difference(lambda, shifted)?;
    Ok(linalg::dot(&w_bar, &phi.vector) - dd * linalg::dot(&w_bar, &bv))
}

/// Quadratic coefficients of the reduced equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GCoeffs<T> {
    pub g20: Complex<T>,
    pub g11: Complex<T>,
    pub g02: Complex<T>,
}

/// `w̄ · (−b3, b3, −b9)`: the projection of the nonlinearity's direction.
fn projected_direction<T: Scalar>(lin: &LinearData<T>, adj: &Adjoint<T>) -> Complex<T> {
    let h = linalg::complexify_vec(&lin.nonlinear_direction());
    linalg::dot(&adj.w_bar(), &h)
}

pub fn g_coeffs<T: Scalar>(
    lin: &LinearData<T>,
    m: &KernelMoments<T>,
    v: &CVec3<T>,
    adj: &Adjoint<T>,
    variant: NormalFormVariant,
) -> GCoeffs<T> {
    let c = projected_direction(lin, adj);
    let two = T::lit(2.0);
    let (v1, v3) = (v[0], v[2]);
    let (v1b, v3b) = (v1.conj(), v3.conj());
    let g11 = match variant {
        NormalFormVariant::Derived => c * (v1 * v3b * m.k_neg1 + v1b * v3 * m.k1),
        NormalFormVariant::Printed => c * (v1b * v3 + v1 * v3b) * (m.k1 + m.k_neg1),
    };
    GCoeffs {
        g20: c * v1 * v3 * m.k1 * two,
        g11,
        g02: c * v1b * v3b * m.k_neg1 * two,
    }
}

/// Solutions of the two linear systems for the constant and `e^{2λ1θ}` parts
/// of the second-order center-manifold terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ESystems<T> {
    pub e1: CVec3<T>,
    pub e2: CVec3<T>,
    /// `‖M E − rhs‖ / ‖rhs‖` for each solve (zero when the rhs vanishes).
    pub residuals: [T; 2],
}

pub fn solve_e_systems<T: Scalar>(
    lin: &LinearData<T>,
    m: &KernelMoments<T>,
    v: &CVec3<T>,
    omega0: T,
    variant: NormalFormVariant,
) -> Result<ESystems<T>> {
    let l1 = Complex::new(T::zero(), omega0);
    let one = Complex::from(T::one());
    let zero = Complex::from(T::zero());
    let (l, b) = (lin.l_complex(), lin.b_complex());
    let (v1, v3) = (v[0], v[2]);
    let (v1b, v3b) = (v1.conj(), v3.conj());
    let (m1, rhs1, m2, rhs2) = match variant {
        NormalFormVariant::Derived => {
            let h = linalg::complexify_vec(&lin.nonlinear_direction());
            (
                // 2λ1 I − L − k2 B
                linalg::combine(-one, &l, -m.k2, &b, l1 * T::lit(2.0)),
                linalg::scale(&h, v1 * v3 * m.k1 * T::lit(2.0)),
                // −(L + B)
                linalg::combine(-one, &l, -one, &b, zero),
                linalg::scale(&h, v1 * v3b * m.k_neg1 + v1b * v3 * m.k1),
            )
        }
        NormalFormVariant::Printed => {
            let b3 = lin.b[2];
            let dir = if b3 == T::zero() {
                [zero; 3]
            } else {
                linalg::complexify_vec(&[T::one(), -T::one(), -lin.b[8] / (b3 * b3)])
            };
            (
                // L + k2 B − 2λ1 I
                linalg::combine(one, &l, m.k2, &b, -l1 * T::lit(2.0)),
                linalg::scale(&dir, v1 * v3 * m.k1 * b3),
                // L + B
                linalg::combine(one, &l, one, &b, zero),
                linalg::scale(&dir, (v1b * v3 + v1 * v3b) * (m.k1 + m.k_neg1) * b3),
            )
        }
    };
    let e1 = checked_solve(&m1, &rhs1)?;
    let e2 = checked_solve(&m2, &rhs2)?;
    let residual = |mat: &linalg::CMat3<T>, x: &CVec3<T>, rhs: &CVec3<T>| {
        let r = linalg::norm(&linalg::sub(&linalg::mat_vec(mat, x), rhs));
        let scale = linalg::norm(rhs);
        if scale == T::zero() {
            r
        } else {
            r / scale
        }
    };
    Ok(ESystems {
        residuals: [residual(&m1, &e1, &rhs1), residual(&m2, &e2, &rhs2)],
        e1,
        e2,
    })
}

fn checked_solve<T: Scalar>(mat: &linalg::CMat3<T>, rhs: &CVec3<T>) -> Result<CVec3<T>> {
    let cond = linalg::condition(mat);
    if !(cond <= T::lit(RESONANCE_CONDITION)) {
        return Err(Error::Resonance(cond.to_f64().unwrap_or(f64::INFINITY)));
    }
    linalg::solve(mat, rhs).ok_or(Error::Resonance(f64::INFINITY))
}

/// Second-order center-manifold term
/// `W(θ) = a·v e^{λ1θ} + b·v̄ e^{λ̄1θ} + E e^{rate·θ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldTerm<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub e: CVec3<T>,
    /// `2λ1` for `W20`, `0` for `W11`.
    pub rate: Complex<T>,
}

impl<T: Scalar> ManifoldTerm<T> {
    pub fn at_zero(&self, v: &CVec3<T>, i: usize) -> Complex<T> {
        self.a * v[i] + self.b * v[i].conj() + self.e[i]
    }

    /// `∫_0^∞ k(s) W_i(−s) ds`, evaluated with the kernel moments; `e_moment`
    /// is the transform at `rate`.
    pub fn kernel_integral(&self, v: &CVec3<T>, i: usize, m: &KernelMoments<T>, e_moment: Complex<T>) -> Complex<T> {
        self.a * v[i] * m.k1 + self.b * v[i].conj() * m.k_neg1 + self.e[i] * e_moment
    }
}

/// `W20` and `W11` built from the g-coefficients and E-vectors.
pub fn manifold_terms<T: Scalar>(
    g: &GCoeffs<T>,
    e: &ESystems<T>,
    omega0: T,
    variant: NormalFormVariant,
) -> (ManifoldTerm<T>, ManifoldTerm<T>) {
    let i = Complex::<T>::i();
    let l1 = Complex::new(T::zero(), omega0);
    let three = T::lit(3.0);
    let zero = Complex::from(T::zero());
    let (a20, b20, a11, b11) = match variant {
        NormalFormVariant::Derived => (
            i * g.g20 / omega0,
            i * g.g02.conj() / (three * omega0),
            -i * g.g11 / omega0,
            i * g.g11.conj() / omega0,
        ),
        NormalFormVariant::Printed => (
            g.g20 / l1,
            -g.g20.conj() / (l1 * three),
            g.g11 / l1,
            -g.g11.conj() / l1,
        ),
    };
    (
        ManifoldTerm { a: a20, b: b20, e: e.e1, rate: l1 * T::lit(2.0) },
        ManifoldTerm { a: a11, b: b11, e: e.e2, rate: zero },
    )
}

/// Cubic coefficient `g21` of the reduced equation.
pub fn g21<T: Scalar>(
    lin: &LinearData<T>,
    m: &KernelMoments<T>,
    v: &CVec3<T>,
    adj: &Adjoint<T>,
    w20: &ManifoldTerm<T>,
    w11: &ManifoldTerm<T>,
) -> Complex<T> {
    let c = projected_direction(lin, adj);
    let half = T::lit(0.5);
    let one = Complex::from(T::one());
    let (v1, v3) = (v[0], v[2]);
    let int11 = w11.kernel_integral(v, 2, m, one);
    let int20 = w20.kernel_integral(v, 2, m, m.k2);
    c * T::lit(2.0)
        * (v1 * int11
            + v1.conj() * int20 * half
            + w11.at_zero(v, 0) * v3 * m.k1
            + w20.at_zero(v, 0) * v3.conj() * m.k_neg1 * half)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Supercritical,
    Subcritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleStability {
    OrbitallyStable,
    Unstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodTrend {
    Increasing,
    Decreasing,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Supercritical => "supercritical",
            Self::Subcritical => "subcritical",
        })
    }
}

impl std::fmt::Display for CycleStability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::OrbitallyStable => "orbitally stable",
            Self::Unstable => "unstable",
        })
    }
}

impl std::fmt::Display for PeriodTrend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Increasing => "period increasing",
            Self::Decreasing => "period decreasing",
        })
    }
}

/// First Lyapunov coefficient and the derived expansion coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfSummary<T> {
    pub c1_0: Complex<T>,
    pub mu2: T,
    pub t2: T,
    pub omega0: T,
}

impl<T: Scalar> HopfSummary<T> {
    pub fn beta2(&self) -> T {
        T::lit(2.0) * self.c1_0.re
    }

    pub fn direction(&self) -> Direction {
        if self.mu2 > T::zero() {
            Direction::Supercritical
        } else {
            Direction::Subcritical
        }
    }

    pub fn cycle_stability(&self) -> CycleStability {
        if self.beta2() < T::zero() {
            CycleStability::OrbitallyStable
        } else {
            CycleStability::Unstable
        }
    }

    pub fn period_trend(&self) -> PeriodTrend {
        if self.t2 > T::zero() {
            PeriodTrend::Increasing
        } else {
            PeriodTrend::Decreasing
        }
    }

    /// `T(ε) = (2π/ω0)(1 + T2 ε²)`.
    pub fn period_estimate(&self, eps: T) -> T {
        T::TAU() / self.omega0 * (T::one() + self.t2 * eps * eps)
    }

    /// `ε² = (a − a0)/μ2` for a parameter offset `a − a0`.
    pub fn eps_squared(&self, offset: T) -> T {
        offset / self.mu2
    }

    /// e.g. "supercritical, orbitally stable, period increasing".
    pub fn classification(&self) -> String {
        format!("{}, {}, {}", self.direction(), self.cycle_stability(), self.period_trend())
    }
}

pub fn hopf_summary<T: Scalar>(
    g: &GCoeffs<T>,
    g21: Complex<T>,
    omega0: T,
    lambda_prime: Complex<T>,
) -> Result<HopfSummary<T>> {
    if lambda_prime.re == T::zero() || !lambda_prime.re.is_finite() {
        return Err(Error::Transversality(lambda_prime.re.to_f64().unwrap_or(f64::NAN)));
    }
    let i = Complex::<T>::i();
    let two = T::lit(2.0);
    let quad = g.g20 * g.g11 - g.g11.norm_sqr() * two - g.g02.norm_sqr() / T::lit(3.0);
    let c1_0 = i / (omega0 * two) * quad + g21 / two;
    let mu2 = -c1_0.re / lambda_prime.re;
    let t2 = -(c1_0.im + mu2 * lambda_prime.im) / omega0;
    Ok(HopfSummary { c1_0, mu2, t2, omega0 })
}

/// Every intermediate of the reduction at one Hopf point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalForm<T> {
    pub variant: NormalFormVariant,
    pub omega0: T,
    pub lambda_prime: Complex<T>,
    pub moments: KernelMoments<T>,
    pub v: CVec3<T>,
    pub adjoint: Adjoint<T>,
    pub g: GCoeffs<T>,
    pub e: ESystems<T>,
    pub w20: ManifoldTerm<T>,
    pub w11: ManifoldTerm<T>,
    pub g21: Complex<T>,
    pub summary: HopfSummary<T>,
}

impl<T: Scalar> NormalForm<T> {
    /// Runs the reduction from precomputed kernel moments. `v_scale`
    /// multiplies the eigenvector before the adjoint is normalized.
    pub fn from_moments(
        lin: &LinearData<T>,
        moments: KernelMoments<T>,
        omega0: T,
        lambda_prime: Complex<T>,
        variant: NormalFormVariant,
        v_scale: Complex<T>,
    ) -> Result<Self> {
        let v = linalg::scale(&eigenvector_v(lin, &moments, omega0), v_scale);
        let adjoint = adjoint_w(lin, &moments, &v, omega0, variant)?;
        let g = g_coeffs(lin, &moments, &v, &adjoint, variant);
        let e = solve_e_systems(lin, &moments, &v, omega0, variant)?;
        let (w20, w11) = manifold_terms(&g, &e, omega0, variant);
        let g21 = g21(lin, &moments, &v, &adjoint, &w20, &w11);
        let summary = hopf_summary(&g, g21, omega0, lambda_prime)?;
        Ok(Self { variant, omega0, lambda_prime, moments, v, adjoint, g, e, w20, w11, g21, summary })
    }

    /// `‖(L + k1 B − λ1 I) v‖ / ‖v‖`.
    pub fn eigen_residual(&self, lin: &LinearData<T>) -> T {
        let l1 = Complex::new(T::zero(), self.omega0);
        let one = Complex::from(T::one());
        let mat = linalg::combine(one, &lin.l_complex(), self.moments.k1, &lin.b_complex(), -l1);
        linalg::norm(&linalg::mat_vec(&mat, &self.v)) / linalg::norm(&self.v)
    }

    /// `⟨φ*, φ⟩` and `⟨φ*, φ̄⟩`.
    pub fn pairings(&self, lin: &LinearData<T>, kernel: &KernelSpec<T>) -> Result<(Complex<T>, Complex<T>)> {
        let l1 = Complex::new(T::zero(), self.omega0);
        let psi = ExpFn { vector: self.adjoint.w, rate: self.adjoint.rate };
        let phi = ExpFn { vector: self.v, rate: l1 };
        let phi_bar = ExpFn { vector: linalg::conj(&self.v), rate: l1.conj() };
        Ok((
            bilinear_pairing(&psi, &phi, lin, kernel)?,
            bilinear_pairing(&psi, &phi_bar, lin, kernel)?,
        ))
    }
}

/// Full reduction at a Hopf point found by [`crate::spectral`].
pub fn normal_form<T: Scalar>(
    lin: &LinearData<T>,
    hopf: &HopfPoint<T>,
    variant: NormalFormVariant,
) -> Result<NormalForm<T>> {
    let moments = kernel_moments(&hopf.kernel, hopf.omega0)?;
    NormalForm::from_moments(lin, moments, hopf.omega0, hopf.lambda_prime, variant, Complex::from(T::one()))
}
