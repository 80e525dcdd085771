//! Verification suites: closed forms against identities, oracles, differential
//! equations and the square-lattice appendix results.

use std::f64::consts::PI;
use std::fmt;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::hyperseries::{continuous_i, TruncationControl};
use crate::lattice::{
    a4_integral, i_bcc, i_tilde, j_bcc, j_tilde, maradudin_sc, summation_formula_check, JtildeForm, LatticeFamily,
    LatticeQuery, MaradudinConfig, MaradudinForm,
};
use crate::odecheck::{ode_residual_i, ode_residual_j3, ode_residual_j_general, LinearOperator};
use crate::oracle::{has_defining_integral, integrate_direct, integrate_mc, integrate_singular_i2, QuadratureConfig};
use crate::quadrature::{integrate_adaptive, AdaptiveRule};
use crate::special::{elliptic_e, elliptic_k, EllipticModulus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Oracle,
    Ode,
    Appendix,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 4] = [Suite::Identities, Suite::Oracle, Suite::Ode, Suite::Appendix];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Oracle => "oracle",
            Suite::Ode => "ode",
            Suite::Appendix => "appendix",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub mc_samples: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 42, mc_samples: 10_000_000 }
    }
}

/// One measured residual against its limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
    /// Set when the computation itself failed.
    pub error: Option<String>,
}

impl Check {
    fn measure(suite: Suite, name: String, limit: f64, f: impl FnOnce() -> Result<f64>) -> Self {
        match f() {
            Ok(measured) => Check { suite: suite.name().into(), name, measured, limit, passed: measured <= limit, error: None },
            Err(e) => Check {
                suite: suite.name().into(),
                name,
                measured: f64::NAN,
                limit,
                passed: false,
                error: Some(e.to_string()),
            },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict}  {:<10}  {}  measured {:.3e}  limit {:.1e}", self.suite, self.name, self.measured, self.limit)?;
        if let Some(e) = &self.error {
            write!(f, "  error: {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        writeln!(f, "{} checks, {} failed", self.checks.len(), self.failures())
    }
}

pub fn run(suite: Suite, config: &VerifyConfig) -> Report {
    let suites: &[Suite] = match suite {
        Suite::All => &Suite::INDIVIDUAL,
        _ => std::slice::from_ref(&suite),
    };
    let mut report = Report::default();
    for s in suites {
        report.checks.extend(match s {
            Suite::Identities => identities(),
            Suite::Oracle => oracle(config),
            Suite::Ode => ode(),
            Suite::Appendix => appendix(),
            Suite::All => unreachable!(),
        });
    }
    report
}

fn tight() -> TruncationControl {
    TruncationControl::tolerance(1e-14)
}

fn relative(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn identities() -> Vec<Check> {
    let s = Suite::Identities;
    let c = tight();
    let mut checks = Vec::new();
    for d in 1..=4u32 {
        for eta in [1.005, 1.1, 2.0, 10.0] {
            checks.push(Check::measure(s, format!("connection I_d = eta*J_(d+1) [d={d}, eta={eta}]"), 1e-12, || {
                Ok(relative(eta * j_bcc(d + 1, eta, &c)?.value, i_bcc(d, eta, &c)?.value))
            }));
        }
    }
    let at_one = TruncationControl::tolerance(1e-9);
    for d in 2..=4u32 {
        checks.push(Check::measure(s, format!("connection I_d = eta*J_(d+1) [d={d}, eta=1]"), 1e-12, || {
            Ok(relative(j_bcc(d + 1, 1.0, &at_one)?.value, i_bcc(d, 1.0, &at_one)?.value))
        }));
    }
    for d in 1..=3u32 {
        for eta in [1.1, 1.5, 2.0] {
            checks.push(Check::measure(s, format!("Jtilde difference = shifted form [d={d}, eta={eta}]"), 1e-10, || {
                let a = j_tilde(d, eta, JtildeForm::Difference, &c)?.value;
                let b = j_tilde(d, eta, JtildeForm::Shifted, &c)?.value;
                Ok((a - b).abs())
            }));
        }
    }
    let h = 1e-5;
    for d in 1..=3u32 {
        for eta in [1.2, 1.5, 2.0] {
            checks.push(Check::measure(s, format!("dItilde/deta = I_d [d={d}, eta={eta}]"), 1e-8, || {
                let fd = (i_tilde(d, eta + h, &c)?.value - i_tilde(d, eta - h, &c)?.value) / (2.0 * h);
                Ok((fd - i_bcc(d, eta, &c)?.value).abs())
            }));
        }
    }
    for eta in [1.1, 2.0, 5.0] {
        let k = || EllipticModulus::new(1.0 / eta);
        checks.push(Check::measure(s, format!("I_1 = (2/pi) K(1/eta) [eta={eta}]"), 1e-12, || {
            Ok((i_bcc(1, eta, &c)?.value - 2.0 / PI * elliptic_k(k()?)?).abs())
        }));
        checks.push(Check::measure(s, format!("Itilde_1 = (2 eta/pi) E(1/eta) [eta={eta}]"), 1e-12, || {
            Ok((i_tilde(1, eta, &c)?.value - 2.0 * eta / PI * elliptic_e(k()?)?).abs())
        }));
        checks.push(Check::measure(s, format!("J_1 = 1/sqrt(eta^2-1) [eta={eta}]"), 1e-12, || {
            Ok((j_bcc(1, eta, &c)?.value - 1.0 / (eta * eta - 1.0).sqrt()).abs())
        }));
    }
    for d in 1..=4u32 {
        for eta in [1.1, 2.0] {
            checks.push(Check::measure(s, format!("continuous I(d) = I_d at integer d [d={d}, eta={eta}]"), 1e-12, || {
                Ok(relative(continuous_i(d as f64, eta, &c)?.value, i_bcc(d, eta, &c)?.value))
            }));
        }
    }
    checks
}

/// `Γ(¼)⁴/(4π³)`.
pub fn watson_constant() -> f64 {
    statrs::function::gamma::gamma(0.25).powi(4) / (4.0 * PI.powi(3))
}

pub fn oracle(config: &VerifyConfig) -> Vec<Check> {
    let s = Suite::Oracle;
    let c = TruncationControl::tolerance(1e-13);
    let quad = QuadratureConfig { rng_seed: config.seed, mc_samples: config.mc_samples, ..QuadratureConfig::default() };
    let mut checks = Vec::new();
    for family in LatticeFamily::ALL {
        for d in 1..=3u32 {
            if !has_defining_integral(family, d) {
                continue;
            }
            for eta in [1.1, 2.0] {
                checks.push(Check::measure(s, format!("series = nested quadrature {family} [d={d}, eta={eta}]"), 1e-6, || {
                    let q = LatticeQuery::new(family, d as f64, eta)?;
                    Ok((q.evaluate(&c)?.value - integrate_direct(&q, &quad)?.value).abs())
                }));
            }
        }
    }
    for family in LatticeFamily::ALL {
        for d in [4u32, 5] {
            if !has_defining_integral(family, d) {
                continue;
            }
            let name = format!("series = Monte Carlo {family} in standard errors [d={d}, eta=2, seed={}]", config.seed);
            checks.push(Check::measure(s, name, 4.0, || {
                let q = LatticeQuery::new(family, d as f64, 2.0)?;
                let mc = integrate_mc(&q, &quad)?;
                Ok((q.evaluate(&c)?.value - mc.value).abs() / mc.error_estimate)
            }));
        }
    }
    let at_one = TruncationControl::tolerance(1e-10);
    checks.push(Check::measure(s, "I_2(1) series = singular quadrature".into(), 5e-5, || {
        Ok((i_bcc(2, 1.0, &at_one)?.value - integrate_singular_i2(&quad)?.value).abs())
    }));
    checks.push(Check::measure(s, "I_2(1) series = Gamma(1/4)^4/(4 pi^3)".into(), 5e-6, || {
        Ok((i_bcc(2, 1.0, &at_one)?.value - watson_constant()).abs())
    }));
    checks
}

pub fn ode() -> Vec<Check> {
    let s = Suite::Ode;
    let mut checks = Vec::new();
    for d in 1..=4u32 {
        checks.push(Check::measure(s, format!("I_d equation, coefficient residual / term scale [d={d}, M=50]"), 1e-13, || {
            Ok(ode_residual_i(d, 50)?.relative())
        }));
    }
    let h = 2.5e-3;
    for eta in [1.2, 2.0] {
        checks.push(Check::measure(s, format!("J_3 third-order equation, finite differences [eta={eta}, h={h}]"), 1e-4, || {
            Ok(ode_residual_j3(eta, h)?.residual)
        }));
    }
    checks.push(Check::measure(s, "J_3 residual falls as h^4 (ratio h=0.04 to h=0.02, inverted)".into(), 1.0 / 12.0, || {
        Ok(ode_residual_j3(2.0, 0.02)?.residual / ode_residual_j3(2.0, 0.04)?.residual)
    }));
    checks.push(Check::measure(s, "general J_d operator at d=3 = J_3 operator (mismatched terms)".into(), 0.0, || {
        let general = LinearOperator::j_equation(3)?;
        let cubic = LinearOperator::cubic_green();
        let mismatched = general.terms().len().abs_diff(cubic.terms().len())
            + general.terms().iter().filter(|t| !cubic.terms().contains(t)).count();
        Ok(mismatched as f64)
    }));
    for eta in [1.2, 2.0] {
        checks.push(Check::measure(s, format!("general operator residual = J_3 residual at d=3 [eta={eta}]"), 1e-15, || {
            Ok((ode_residual_j_general(3, eta, h)?.residual - ode_residual_j3(eta, h)?.residual).abs())
        }));
    }
    for d in 2..=6u32 {
        // Higher orders need wider stencils to stay above rounding noise.
        let h = (0.005 * f64::from(1u32 << d.saturating_sub(3))).min(0.02);
        checks.push(Check::measure(s, format!("general J_d equation, residual / term scale [d={d}, eta=2, h={h}]"), 1e-6, || {
            let r = ode_residual_j_general(d, 2.0, h)?;
            Ok(r.residual / r.scale)
        }));
    }
    checks
}

pub fn appendix() -> Vec<Check> {
    let s = Suite::Appendix;
    let c = tight();
    let mut checks = Vec::new();
    for (eta, limit) in [(2.0, 1e-10), (1.1, 1e-8)] {
        checks.push(Check::measure(s, format!("square-lattice sum = 2F1(1/2,1/2;1;1/eta^2) [eta={eta}]"), limit, || {
            Ok(summation_formula_check(eta)?.abs_diff)
        }));
    }
    let rule = AdaptiveRule::new(1e-13, 500);
    for k in 1..=3u32 {
        for eta in [1.5, 2.0] {
            checks.push(Check::measure(s, format!("cosine power integral = 2F1 [k={k}, eta={eta}]"), 1e-8, || {
                let q = integrate_adaptive(|x: f64| (1.0 - x.cos() / eta).powi(-(k as i32)), 0.0, PI, &rule)?;
                Ok((a4_integral(k, eta, &c)?.value - q.value / PI).abs())
            }));
        }
    }
    let quad = QuadratureConfig::default();
    let config = MaradudinConfig::default();
    for (family, form) in [(LatticeFamily::MaradudinSqrt, MaradudinForm::Sqrt), (LatticeFamily::MaradudinSq, MaradudinForm::Sq)] {
        for d in 1..=2u32 {
            for eta in [1.5, 2.0] {
                checks.push(Check::measure(s, format!("{family} double integral = sc cube average [d={d}, eta={eta}]"), 1e-5, || {
                    let direct = integrate_direct(&LatticeQuery::new(family, d as f64, eta)?, &quad)?;
                    Ok((maradudin_sc(d as f64, eta, form, &config)?.value - direct.value).abs())
                }));
            }
        }
    }
    checks
}
