use num_complex::Complex;

use super::{Equilibrium, ModelParams};
use crate::linalg::{self, CMat3, Mat3};
use crate::{Result, Scalar};

/// Which closed forms produce the linear coefficients.
///
/// The published coefficient formulas (`b6 = a7·x0`, the printed `r0`, the
/// printed Hurwitz determinant `D3`) reproduce the reference numbers of the
/// malaria example but are not the Jacobian of the model: the absorption term
/// `a7 x z` contributes `a7·z0` to `∂ż/∂x`, and `det(λI − L − κB)` has constant
/// term `b1b5b8 − b1b2b7 + b2b4b7 − b2b5b6`. `Jacobian` uses the exact
/// linearization, for which every spectral and normal-form identity holds and
/// which matches direct simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    #[default]
    Published,
    Jacobian,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Published => "published",
            Self::Jacobian => "jacobian",
        })
    }
}

/// Coefficients of `Δ(λ) = λ³ + p2λ² + p1λ + (r2λ² + r1λ + r0)·κ(λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharCoeffs<T> {
    pub p1: T,
    pub p2: T,
    pub r0: T,
    pub r1: T,
    pub r2: T,
}

impl<T: Scalar> CharCoeffs<T> {
    /// Coefficients of the undelayed cubic `λ³ + m2λ² + m1λ + m0`.
    pub fn m2(&self) -> T {
        self.p2 + self.r2
    }
    pub fn m1(&self) -> T {
        self.p1 + self.r1
    }
    pub fn m0(&self) -> T {
        self.r0
    }

    /// Coefficients of the frequency sextic `ω⁶ + n1ω⁴ + n2ω² + n3`.
    pub fn n1(&self) -> T {
        self.p2 * self.p2 - T::lit(2.0) * self.p1 - self.r2 * self.r2
    }
    pub fn n2(&self) -> T {
        self.p1 * self.p1 - self.r1 * self.r1 + T::lit(2.0) * self.r0 * self.r2
    }
    pub fn n3(&self) -> T {
        -self.r0 * self.r0
    }

    /// `λ³ + p2λ² + p1λ`.
    pub fn undelayed_part(&self, lambda: Complex<T>) -> Complex<T> {
        ((lambda + self.p2) * lambda + self.p1) * lambda
    }

    /// `r2λ² + r1λ + r0`.
    pub fn delayed_part(&self, lambda: Complex<T>) -> Complex<T> {
        (lambda * self.r2 + self.r1) * lambda + self.r0
    }
}

/// Linear data about an equilibrium: the coefficients `b1..b9` of the shifted
/// system, the instantaneous matrix `L`, the kernel-weighted matrix `B` (only
/// its third column is nonzero) and the characteristic coefficients.
///
/// With `u = (x − x0, y − y0, z − z0)` and `K = ∫ k(s) u3(t − s) ds`:
///
/// ```text
/// u1' = −b1 u1 − b2 K − b3 u1 K
/// u2' =  b4 u1 − b5 u2 + b2 K + b3 u1 K
/// u3' = −b6 u1 + b7 u2 − b8 K − b9 u1 K
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearData<T> {
    pub equilibrium: Equilibrium<T>,
    pub convention: Convention,
    pub b: [T; 9],
    pub l: Mat3<T>,
    pub bmat: Mat3<T>,
    pub coeffs: CharCoeffs<T>,
}

impl<T: Scalar> LinearData<T> {
    /// Third column of `B`: `(−b2, b2, −b8)`.
    pub fn b_column(&self) -> [T; 3] {
        [self.bmat[0][2], self.bmat[1][2], self.bmat[2][2]]
    }

    /// Direction of the quadratic term: `H(u) = (−b3, b3, −b9)ᵀ u1 K`.
    pub fn nonlinear_direction(&self) -> [T; 3] {
        let b = &self.b;
        [-b[2], b[2], -b[8]]
    }

    pub fn l_complex(&self) -> CMat3<T> {
        linalg::complexify(&self.l)
    }

    pub fn b_complex(&self) -> CMat3<T> {
        linalg::complexify(&self.bmat)
    }

    /// `det(λI − L − κB)`. Equals the polynomial form of the characteristic
    /// function only under [`Convention::Jacobian`].
    pub fn char_determinant(&self, lambda: Complex<T>, kappa: Complex<T>) -> Complex<T> {
        let one = Complex::from(T::one());
        let m = linalg::combine(-one, &self.l_complex(), -kappa, &self.b_complex(), lambda);
        linalg::det(&m)
    }
}

/// Linearizes the model about `e` under the given convention.
pub fn linearization<T: Scalar>(
    p: &ModelParams<T>,
    e: &Equilibrium<T>,
    convention: Convention,
) -> Result<LinearData<T>> {
    let (x0, z0) = (e.x, e.z);
    let b1 = p.a2 + p.a3 * z0;
    let b2 = p.a3 * x0;
    let b3 = p.a3;
    let b4 = p.a3 * z0;
    let b5 = p.a4;
    let b6 = match convention {
        Convention::Published => p.a7 * x0,
        Convention::Jacobian => p.a7 * z0,
    };
    let b7 = p.a4 * p.a5;
    let b8 = p.a6 + p.a7 * x0;
    let b9 = p.a7;

    let zero = T::zero();
    let l = [[-b1, zero, zero], [b4, -b5, zero], [-b6, b7, zero]];
    let bmat = [[zero, zero, -b2], [zero, zero, b2], [zero, zero, -b8]];

    let r0 = match convention {
        Convention::Published => b4 * b7 - b1 * b2 * b7 - b1 * b5 * b8 - b2 * b5 * b6,
        Convention::Jacobian => b1 * b5 * b8 - b1 * b2 * b7 + b2 * b4 * b7 - b2 * b5 * b6,
    };
    let coeffs = CharCoeffs {
        p2: b1 + b5,
        p1: b1 * b5,
        r2: b8,
        r1: b8 * (b1 + b5) - b2 * b6 - b2 * b7,
        r0,
    };
    Ok(LinearData {
        equilibrium: *e,
        convention,
        b: [b1, b2, b3, b4, b5, b6, b7, b8, b9],
        l,
        bmat,
        coeffs,
    })
}
