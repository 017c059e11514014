//! `hopfkit analyze`: equilibria, characteristic coefficients, the Hopf
//! point for one kernel family and the normal-form classification there.

use std::fmt::Write as _;

use hopfkit_core::model::{equilibria, equilibrium_residual, linearization, Convention};
use hopfkit_core::normal_form::{normal_form, NormalFormVariant};
use hopfkit_core::spectral::{discrete_hopf, find_q0, stability_tau_zero, D3Form, DEFAULT_Q_MAX};
use hopfkit_core::{Error, Scalar};
use num_complex::Complex;
use serde::Serialize;

use crate::config::{Linearization, Precision};
use crate::{CliError, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum KernelFamily {
    Dirac,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Human,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl<T: Scalar> From<Complex<T>> for Cx {
    fn from(c: Complex<T>) -> Self {
        Self { re: f(c.re), im: f(c.im) }
    }
}

impl std::fmt::Display for Cx {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(fm, "{} {sign} {}i", sig(self.re), sig(self.im.abs()))
    }
}

fn f<T: Scalar>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Ten significant digits, fixed notation where that stays readable.
pub fn sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor();
    if (-3.0..7.0).contains(&mag) {
        format!("{v:.*}", (9.0 - mag) as usize)
    } else {
        format!("{v:.9e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub a: [f64; 7],
    pub linearization: Linearization,
    pub precision: Precision,
    pub kernel: KernelFamily,
    pub equilibria: EquilibriaReport,
    pub b: [f64; 9],
    pub coefficients: CoeffReport,
    pub stable_without_delay: bool,
    pub hopf: HopfReport,
    pub normal_form: NormalFormReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriaReport {
    pub pathogen_free: [f64; 3],
    pub interior: [f64; 3],
    pub interior_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoeffReport {
    pub p1: f64,
    pub p2: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfReport {
    /// `"tau"` or `"q"`.
    pub parameter: &'static str,
    pub critical: f64,
    pub omega0: f64,
    pub period: f64,
    pub lambda_prime: Cx,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalFormReport {
    pub variant: String,
    pub g20: Cx,
    pub g11: Cx,
    pub g02: Cx,
    pub g21: Cx,
    pub c1_0: Cx,
    pub mu2: f64,
    pub beta2: f64,
    pub t2: f64,
    pub classification: String,
}

/// D3 form paired with each linearization convention.
pub fn d3_form(convention: Convention) -> D3Form {
    match convention {
        Convention::Published => D3Form::Printed,
        Convention::Jacobian => D3Form::RouthHurwitz,
    }
}

pub fn analyze(config: &RunConfig, kernel: KernelFamily) -> Result<Report, CliError> {
    match config.precision {
        Precision::F64 => analyze_as::<f64>(config, kernel),
        Precision::F32 => analyze_as::<f32>(config, kernel),
    }
}

fn analyze_as<T: Scalar>(config: &RunConfig, kernel: KernelFamily) -> Result<Report, CliError> {
    let p = config.params::<T>();
    let (free, interior) = equilibria(&p)?;
    let e = interior.ok_or(Error::NoInteriorEquilibrium)?;
    let convention = config.convention();
    let lin = linearization(&p, &e, convention)?;
    let c = lin.coeffs;
    let hopf = match kernel {
        KernelFamily::Dirac => discrete_hopf(&c)?,
        KernelFamily::Weak => find_q0(&c, d3_form(convention), T::lit(DEFAULT_Q_MAX))?,
    };
    let nf = normal_form(&lin, &hopf, NormalFormVariant::Derived)?;
    let s = nf.summary;
    Ok(Report {
        a: config.a,
        linearization: config.linearization,
        precision: config.precision,
        kernel,
        equilibria: EquilibriaReport {
            pathogen_free: free.state().map(f),
            interior: e.state().map(f),
            interior_residual: f(equilibrium_residual(&p, &e)),
        },
        b: lin.b.map(f),
        coefficients: CoeffReport { p1: f(c.p1), p2: f(c.p2), r0: f(c.r0), r1: f(c.r1), r2: f(c.r2) },
        stable_without_delay: stability_tau_zero(&c),
        hopf: HopfReport {
            parameter: match kernel {
                KernelFamily::Dirac => "tau",
                KernelFamily::Weak => "q",
            },
            critical: f(hopf.critical()),
            omega0: f(hopf.omega0),
            period: f(T::TAU() / hopf.omega0),
            lambda_prime: hopf.lambda_prime.into(),
            residual: f(hopf.residual),
        },
        normal_form: NormalFormReport {
            variant: nf.variant.to_string(),
            g20: nf.g.g20.into(),
            g11: nf.g.g11.into(),
            g02: nf.g.g02.into(),
            g21: nf.g21.into(),
            c1_0: s.c1_0.into(),
            mu2: f(s.mu2),
            beta2: f(s.beta2()),
            t2: f(s.t2),
            classification: s.classification(),
        },
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut o = String::new();
        let triple = |v: [f64; 3]| format!("({}, {}, {})", sig(v[0]), sig(v[1]), sig(v[2]));
        let a: Vec<String> = self.a.iter().map(|&v| sig(v)).collect();
        let _ = writeln!(o, "rates a1..a7        {}", a.join(", "));
        let _ = writeln!(o, "linearization       {} ({})", self.linearization, self.precision);
        let eq = &self.equilibria;
        let _ = writeln!(o, "pathogen-free X1    {}", triple(eq.pathogen_free));
        let _ = writeln!(o, "interior X2         {}  residual {:.3e}", triple(eq.interior), eq.interior_residual);
        for (i, b) in self.b.iter().enumerate() {
            let _ = writeln!(o, "b{}                  {}", i + 1, sig(*b));
        }
        let c = &self.coefficients;
        let _ = writeln!(o, "p1, p2              {}, {}", sig(c.p1), sig(c.p2));
        let _ = writeln!(o, "r0, r1, r2          {}, {}, {}", sig(c.r0), sig(c.r1), sig(c.r2));
        let verdict = if self.stable_without_delay { "stable" } else { "unstable" };
        let _ = writeln!(o, "X2 without delay    {verdict}");
        let h = &self.hopf;
        let kernel = match self.kernel {
            KernelFamily::Dirac => "dirac",
            KernelFamily::Weak => "weak",
        };
        let _ = writeln!(o, "kernel              {kernel}");
        let _ = writeln!(o, "{:<20}{}", format!("{}0", h.parameter), sig(h.critical));
        let _ = writeln!(o, "omega0              {}", sig(h.omega0));
        let _ = writeln!(o, "2pi/omega0          {}", sig(h.period));
        let _ = writeln!(o, "lambda'             {}", h.lambda_prime);
        let _ = writeln!(o, "|Delta(i omega0)|   {:.3e}", h.residual);
        let n = &self.normal_form;
        let _ = writeln!(o, "normal form         {}", n.variant);
        for (name, v) in [("g20", n.g20), ("g11", n.g11), ("g02", n.g02), ("g21", n.g21), ("c1(0)", n.c1_0)] {
            let _ = writeln!(o, "  {name:<18}{v}");
        }
        let _ = writeln!(o, "  mu2               {}", sig(n.mu2));
        let _ = writeln!(o, "  beta2             {}", sig(n.beta2));
        let _ = writeln!(o, "  T2                {}", sig(n.t2));
        let _ = writeln!(o, "classification      {}", n.classification);
        o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> RunConfig {
        RunConfig::parse(r#"{"a": [2, 0.02, 0.5, 2, 1.5, 0.03, 0.5]}"#).unwrap()
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.8975032747), "0.8975032747");
        assert_eq!(sig(33.29333333333), "33.29333333");
        assert_eq!(sig(-7.058e-6), "-7.058000000e-6");
        assert_eq!(sig(0.0), "0");
    }

    #[test]
    fn dirac_report() {
        let r = analyze(&example(), KernelFamily::Dirac).unwrap();
        assert_eq!(r.hopf.parameter, "tau");
        assert!((r.hopf.critical - 0.8975032747).abs() < 1e-9);
        assert!((r.hopf.omega0 - 1.140149275).abs() < 1e-8);
        assert!(r.stable_without_delay);
        let text = r.to_human();
        assert!(text.contains("tau0                0.89750327"), "{text}");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["hopf"]["critical"].as_f64(), Some(r.hopf.critical));
        assert_eq!(json["kernel"], "dirac");
    }

    #[test]
    fn single_precision_agrees_with_double() {
        let mut c = example();
        let d = analyze(&c, KernelFamily::Dirac).unwrap();
        c.precision = Precision::F32;
        let s = analyze(&c, KernelFamily::Dirac).unwrap();
        assert!((s.hopf.critical - d.hopf.critical).abs() < 1e-4);
        assert_eq!(s.normal_form.classification, d.normal_form.classification);
    }

    #[test]
    fn error_exit_codes() {
        let mut c = example();
        c.a[6] = 0.75; // a7 = a3 a5: no interior equilibrium
        assert_eq!(analyze(&c, KernelFamily::Dirac).unwrap_err().exit_code(), 3);
        let mut c = example();
        c.a[1] = -1.0;
        assert_eq!(analyze(&c, KernelFamily::Dirac).unwrap_err().exit_code(), 2);
        // Exact Routh-Hurwitz boundary has no crossing at these rates.
        let mut c = example();
        c.linearization = Linearization::Jacobian;
        assert_eq!(analyze(&c, KernelFamily::Weak).unwrap_err().exit_code(), 4);
    }
}
