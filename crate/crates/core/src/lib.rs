//! Stability and Hopf-bifurcation analysis of a within-host pathogen–immune
//! model whose infection terms act through a delay kernel.
//!
//! * [`model`]: parameters, equilibria, kernels, linearization.
//! * [`spectral`]: characteristic equation, Routh–Hurwitz tests, critical
//!   delays and kernel rates, transversality.
//! * [`normal_form`]: center-manifold reduction and the Hopf coefficients
//!   `c1(0)`, `μ2`, `β2`, `T2`.
//! * [`simulator`]: fixed-step integration of the delay and chain systems,
//!   a direct-quadrature integrator for the integro-differential form, and
//!   period detection.
//!
//! Everything is generic over [`Scalar`]; the `*64` aliases below fix `f64`.

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod linalg;
pub mod model;
pub mod normal_form;
pub mod poly;
mod scalar;
pub mod simulator;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use model::{Convention, KernelKind, KernelSpec};

pub type ModelParams64 = model::ModelParams<f64>;
pub type Equilibrium64 = model::Equilibrium<f64>;
pub type LinearData64 = model::LinearData<f64>;
pub type CharCoeffs64 = model::CharCoeffs<f64>;
pub type KernelSpec64 = model::KernelSpec<f64>;
pub type HopfPoint64 = spectral::HopfPoint<f64>;
pub type NormalForm64 = normal_form::NormalForm<f64>;
pub type HopfSummary64 = normal_form::HopfSummary<f64>;
pub type SimConfig64 = simulator::SimConfig<f64>;
pub type Trajectory64 = simulator::Trajectory<f64>;

pub type ModelParams32 = model::ModelParams<f32>;
pub type HopfPoint32 = spectral::HopfPoint<f32>;
pub type HopfSummary32 = normal_form::HopfSummary<f32>;
pub type Trajectory32 = simulator::Trajectory<f32>;
