//! Model parameters, equilibria and the linearization about an equilibrium.
//!
//! The model tracks uninfected cells `x`, infected cells `y` and free pathogen
//! `z`. Infection and absorption act through the kernel-weighted pathogen
//! history rather than the instantaneous density:
//!
//! ```text
//! x' = a1 - a2 x - a3 x K
//! y' = -a4 y + a3 x K
//! z' = a4 a5 y - a6 K - a7 x K,      K(t) = ∫₀^∞ k(s) z(t - s) ds
//! ```

mod kernel;
mod linear;

pub use kernel::{KernelKind, KernelSpec};
pub use linear::{linearization, CharCoeffs, Convention, LinearData};

use crate::{Error, Result, Scalar};

/// The seven nonnegative rates of the model, per day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams<T> {
    /// Recruitment of uninfected cells.
    pub a1: T,
    /// Death rate of uninfected cells.
    pub a2: T,
    /// Infection rate.
    pub a3: T,
    /// Death rate of infected cells.
    pub a4: T,
    /// Burst size (pathogens released per dying infected cell).
    pub a5: T,
    /// Pathogen clearance.
    pub a6: T,
    /// Absorption of pathogens into uninfected cells.
    pub a7: T,
}

impl<T: Scalar> ModelParams<T> {
    pub fn from_array(a: [T; 7]) -> Self {
        let [a1, a2, a3, a4, a5, a6, a7] = a;
        Self { a1, a2, a3, a4, a5, a6, a7 }
    }

    pub fn to_array(&self) -> [T; 7] {
        [self.a1, self.a2, self.a3, self.a4, self.a5, self.a6, self.a7]
    }

    /// `a3·a5 - a7`, the net pathogen yield per infection event.
    fn net_yield(&self) -> T {
        self.a3 * self.a5 - self.a7
    }

    /// The malaria parameter set used throughout the numerical examples.
    pub fn malaria_example() -> Self {
        Self::from_array([2.0, 0.02, 0.5, 2.0, 1.5, 0.03, 0.5].map(T::lit))
    }
}

/// Positivity problem with one rate (1-based index as in `a1..a7`).
#[derive(Debug, Clone, PartialEq)]
pub enum ParamViolation {
    NotFinite { index: usize },
    Negative { index: usize },
    /// `a2..a6` must be strictly positive.
    NotPositive { index: usize },
}

impl std::fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NotFinite { index } => write!(f, "a{index} is not finite"),
            Self::Negative { index } => write!(f, "a{index} is negative"),
            Self::NotPositive { index } => write!(f, "a{index} must be strictly positive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamReport {
    pub violations: Vec<ParamViolation>,
    /// `0 ≤ a7 < a3·a5` and `0 < a2·a6 < a1·(a3·a5 − a7)`.
    pub interior_condition: bool,
}

impl ParamReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_params<T: Scalar>(p: &ModelParams<T>) -> ParamReport {
    let mut violations = Vec::new();
    for (i, &a) in p.to_array().iter().enumerate() {
        let index = i + 1;
        if !a.is_finite() {
            violations.push(ParamViolation::NotFinite { index });
        } else if a < T::zero() {
            violations.push(ParamViolation::Negative { index });
        } else if (2..=6).contains(&index) && a == T::zero() {
            violations.push(ParamViolation::NotPositive { index });
        }
    }
    let interior_condition = violations.is_empty() && {
        let net = p.net_yield();
        let loss = p.a2 * p.a6;
        p.a7 >= T::zero() && net > T::zero() && loss > T::zero() && loss < p.a1 * net
    };
    ParamReport { violations, interior_condition }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    /// `X1 = (a1/a2, 0, 0)`.
    PathogenFree,
    /// `X2`, all three densities positive.
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub kind: EquilibriumKind,
}

impl<T: Scalar> Equilibrium<T> {
    pub fn state(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }
}

/// Pathogen-free equilibrium and, when the interior condition holds, the
/// interior one, both from their closed forms.
pub fn equilibria<T: Scalar>(
    p: &ModelParams<T>,
) -> Result<(Equilibrium<T>, Option<Equilibrium<T>>)> {
    let report = validate_params(p);
    if !report.is_valid() {
        let msg: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::InvalidParams(msg.join("; ")));
    }
    let free = Equilibrium {
        x: p.a1 / p.a2,
        y: T::zero(),
        z: T::zero(),
        kind: EquilibriumKind::PathogenFree,
    };
    if !report.interior_condition {
        return Ok((free, None));
    }
    let net = p.net_yield();
    let surplus = p.a1 * net - p.a2 * p.a6;
    let interior = Equilibrium {
        x: p.a6 / net,
        y: surplus / (p.a4 * net),
        z: surplus / (p.a3 * p.a6),
        kind: EquilibriumKind::Interior,
    };
    Ok((free, Some(interior)))
}

/// Interior equilibrium or [`Error::NoInteriorEquilibrium`].
pub fn interior_equilibrium<T: Scalar>(p: &ModelParams<T>) -> Result<Equilibrium<T>> {
    equilibria(p)?.1.ok_or(Error::NoInteriorEquilibrium)
}

/// Max-norm of the steady-state equations at `(x, y, z)`.
pub fn equilibrium_residual<T: Scalar>(p: &ModelParams<T>, e: &Equilibrium<T>) -> T {
    let infection = p.a3 * e.x * e.z;
    let r1 = p.a1 - p.a2 * e.x - infection;
    let r2 = p.a4 * e.y - infection;
    let r3 = p.a4 * p.a5 * e.y - p.a6 * e.z - p.a7 * e.x * e.z;
    r1.abs().max(r2.abs()).max(r3.abs())
}
