//! Lattice integral families and their hypergeometric closed forms.
//!
//! All bcc integrals are averages over the cube `[0, π]^d`; with `c_j = cos(x_j/2)` and
//! `P = Π c_j²`:
//!
//! | family   | integrand                 | series (w = 1/η²)                                   |
//! |----------|---------------------------|------------------------------------------------------|
//! | `I`      | `η / √(η² − P)`           | `(d+1)F_d(½,…,½; 1,…,1; w)`                          |
//! | `Itilde` | `√(η² − P)`               | `η (d+1)F_d(−½, ½,…,½; 1,…,1; w)`                    |
//! | `Jtilde` | `P / √(η² − P)`           | `η⁻¹ 2^{-d} (d+1)F_d(½, 3/2,…,3/2; 2,…,2; w)`        |
//! | `J`      | `η / (η² − P)`            | `η⁻¹ dF_{d−1}(½,…,½; 1,…,1; w)`                      |
//! | `Gferro` | `1 / (η − Π cos x_j)`     | same series as `J`                                   |
//!
//! The square-lattice Green function and the two Maradudin forms live on the simple
//! cubic lattice and use `mean_j cos x_j` instead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperseries::{
    check_eta, continuous_i, ghgf_eval_with, ConvergenceClass, HypergeometricSpec, SeriesEvaluation,
    TruncationControl,
};
use crate::quadrature::{gauss_legendre, QuadratureEstimate};
use crate::special::bessel_i0_scaled;
use crate::summation::NeumaierSum;

/// Roots of the leading coefficients `(½)_m/m!` for `m = 0..8`.
pub const ASYMPTOTIC_BASES: [f64; 8] =
    [1.0, 1.0 / 2.0, 3.0 / 8.0, 5.0 / 16.0, 35.0 / 128.0, 63.0 / 256.0, 231.0 / 1024.0, 429.0 / 2048.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeFamily {
    I,
    Itilde,
    Jtilde,
    J,
    Gferro,
    Gsc2,
    MaradudinSqrt,
    MaradudinSq,
}

impl LatticeFamily {
    pub const ALL: [LatticeFamily; 8] = [
        LatticeFamily::I,
        LatticeFamily::Itilde,
        LatticeFamily::Jtilde,
        LatticeFamily::J,
        LatticeFamily::Gferro,
        LatticeFamily::Gsc2,
        LatticeFamily::MaradudinSqrt,
        LatticeFamily::MaradudinSq,
    ];

    /// The five hyper-bcc families.
    pub const BCC: [LatticeFamily; 5] =
        [LatticeFamily::I, LatticeFamily::Itilde, LatticeFamily::Jtilde, LatticeFamily::J, LatticeFamily::Gferro];

    pub fn name(self) -> &'static str {
        match self {
            LatticeFamily::I => "I",
            LatticeFamily::Itilde => "Itilde",
            LatticeFamily::Jtilde => "Jtilde",
            LatticeFamily::J => "J",
            LatticeFamily::Gferro => "Gferro",
            LatticeFamily::Gsc2 => "Gsc2",
            LatticeFamily::MaradudinSqrt => "MaradudinSqrt",
            LatticeFamily::MaradudinSq => "MaradudinSq",
        }
    }

    /// Whether real, non-integer `d` is meaningful for this family.
    pub fn accepts_real_dimension(self) -> bool {
        matches!(self, LatticeFamily::I | LatticeFamily::J | LatticeFamily::MaradudinSqrt | LatticeFamily::MaradudinSq)
    }

    /// The only admissible dimension, for families tied to one.
    pub fn fixed_dimension(self) -> Option<u32> {
        match self {
            LatticeFamily::Gsc2 => Some(2),
            _ => None,
        }
    }

    /// The defining integrand at the point `x`; the integral is its average over `[0, π]^d`
    /// with `d = x.len()`.
    pub fn integrand(self, eta: f64, x: &[f64]) -> f64 {
        match self {
            LatticeFamily::I => eta / (eta * eta - half_cos_product(x)).sqrt(),
            LatticeFamily::Itilde => (eta * eta - half_cos_product(x)).sqrt(),
            LatticeFamily::Jtilde => {
                let p = half_cos_product(x);
                p / (eta * eta - p).sqrt()
            }
            LatticeFamily::J => eta / (eta * eta - half_cos_product(x)),
            LatticeFamily::Gferro => 1.0 / (eta - x.iter().map(|v| v.cos()).product::<f64>()),
            LatticeFamily::Gsc2 => 1.0 / (eta - mean_cos(x)),
            LatticeFamily::MaradudinSqrt => 1.0 / (eta * eta - mean_cos(x).powi(2)).sqrt(),
            LatticeFamily::MaradudinSq => 1.0 / (eta * eta - mean_cos(x).powi(2)),
        }
    }
}

impl fmt::Display for LatticeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for LatticeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LatticeFamily::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::domain(format!("unknown family '{s}'")))
    }
}

/// `Π cos²(x_j/2)`.
fn half_cos_product(x: &[f64]) -> f64 {
    x.iter().map(|v| (0.5 * v).cos().powi(2)).product()
}

fn mean_cos(x: &[f64]) -> f64 {
    x.iter().map(|v| v.cos()).sum::<f64>() / x.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JtildeForm {
    /// `η I_d − Ĩ_d`.
    Difference,
    /// The single shifted-parameter series.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaradudinForm {
    Sqrt,
    Sq,
}

/// A family at a dimension and anisotropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeQuery {
    pub family: LatticeFamily,
    pub dimension: f64,
    pub anisotropy: f64,
}

/// Value from either a series or a panel quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeValue {
    pub value: f64,
    pub error_bound: f64,
    /// Series terms or integrand evaluations.
    pub work: u64,
}

impl From<SeriesEvaluation> for LatticeValue {
    fn from(e: SeriesEvaluation) -> Self {
        LatticeValue { value: e.value, error_bound: e.tail_bound, work: e.terms_used }
    }
}

impl From<QuadratureEstimate> for LatticeValue {
    fn from(q: QuadratureEstimate) -> Self {
        LatticeValue { value: q.value, error_bound: q.error, work: q.evaluations }
    }
}

impl LatticeQuery {
    pub fn new(family: LatticeFamily, dimension: f64, anisotropy: f64) -> Result<Self> {
        check_eta(anisotropy)?;
        if !dimension.is_finite() || dimension < 1.0 {
            return Err(Error::domain(format!("dimension {dimension} must be >= 1")));
        }
        if !family.accepts_real_dimension() && dimension.fract() != 0.0 {
            return Err(Error::domain(format!("family {family} needs an integer dimension, got {dimension}")));
        }
        if let Some(fixed) = family.fixed_dimension() {
            if dimension != fixed as f64 {
                return Err(Error::domain(format!("family {family} is defined only for d = {fixed}")));
            }
        }
        Ok(Self { family, dimension, anisotropy })
    }

    /// Integer dimension, when the query has one.
    pub fn integer_dimension(&self) -> Option<u32> {
        (self.dimension.fract() == 0.0 && self.dimension <= u32::MAX as f64).then_some(self.dimension as u32)
    }

    /// Evaluates through the closed form; non-integer `d` goes through the `β(d, m)` series.
    pub fn evaluate(&self, control: &TruncationControl) -> Result<LatticeValue> {
        let eta = self.anisotropy;
        let d = self.dimension;
        let int_d = self.integer_dimension();
        let value: LatticeValue = match (self.family, int_d) {
            (LatticeFamily::I, Some(k)) => i_bcc(k, eta, control)?.into(),
            (LatticeFamily::I, None) => continuous_i(d, eta, control)?.into(),
            (LatticeFamily::J, Some(k)) => j_bcc(k, eta, control)?.into(),
            (LatticeFamily::J, None) => continuous_j(d, eta, control)?.into(),
            (LatticeFamily::Itilde, Some(k)) => i_tilde(k, eta, control)?.into(),
            (LatticeFamily::Jtilde, Some(k)) => j_tilde(k, eta, JtildeForm::Shifted, control)?.into(),
            (LatticeFamily::Gferro, Some(k)) => g_bcc_ferro(k, eta, control)?.into(),
            (LatticeFamily::Gsc2, Some(_)) => g_sc2(eta, control)?.into(),
            (LatticeFamily::MaradudinSqrt, _) => {
                maradudin_sc(d, eta, MaradudinForm::Sqrt, &MaradudinConfig::default())?.into()
            }
            (LatticeFamily::MaradudinSq, _) => {
                maradudin_sc(d, eta, MaradudinForm::Sq, &MaradudinConfig::default())?.into()
            }
            (family, None) => return Err(Error::domain(format!("family {family} needs an integer dimension"))),
        };
        Ok(value)
    }
}

fn scaled(mut e: SeriesEvaluation, factor: f64) -> SeriesEvaluation {
    e.value *= factor;
    e.last_term *= factor;
    e.tail_bound *= factor.abs();
    e.tail_correction *= factor;
    e
}

fn check_dimension(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    Ok(())
}

fn repeated(value: f64, count: u32) -> impl Iterator<Item = f64> {
    std::iter::repeat_n(value, count as usize)
}

/// `I_d(η) = (d+1)F_d(½,…,½; 1,…,1; 1/η²)`.
pub fn i_bcc(d: u32, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    check_dimension(d)?;
    check_eta(eta)?;
    ghgf_eval_with(&HypergeometricSpec::watson_i(d, eta)?, control)
}

/// `Ĩ_d(η) = η (d+1)F_d(−½, ½,…,½; 1,…,1; 1/η²)`.
pub fn i_tilde(d: u32, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    check_dimension(d)?;
    check_eta(eta)?;
    let numerator = std::iter::once(-0.5).chain(repeated(0.5, d)).collect();
    let spec = HypergeometricSpec::new(numerator, repeated(1.0, d).collect(), 1.0 / (eta * eta))?;
    Ok(scaled(ghgf_eval_with(&spec, control)?, eta))
}

/// `J̃_d(η)` in either of its two series forms.
pub fn j_tilde(d: u32, eta: f64, form: JtildeForm, control: &TruncationControl) -> Result<SeriesEvaluation> {
    check_dimension(d)?;
    check_eta(eta)?;
    match form {
        JtildeForm::Difference => {
            let first = scaled(i_bcc(d, eta, control)?, eta);
            let second = i_tilde(d, eta, control)?;
            let convergence = if first.convergence == ConvergenceClass::ConvergesAbsolutely {
                second.convergence
            } else {
                first.convergence
            };
            Ok(SeriesEvaluation {
                value: first.value - second.value,
                terms_used: first.terms_used.max(second.terms_used),
                last_term: first.last_term - second.last_term,
                tail_bound: first.tail_bound + second.tail_bound,
                tail_correction: first.tail_correction - second.tail_correction,
                convergence,
            })
        }
        JtildeForm::Shifted => {
            let numerator = std::iter::once(0.5).chain(repeated(1.5, d)).collect();
            let spec = HypergeometricSpec::new(numerator, repeated(2.0, d).collect(), 1.0 / (eta * eta))?;
            Ok(scaled(ghgf_eval_with(&spec, control)?, 0.5_f64.powi(d as i32) / eta))
        }
    }
}

/// `J_d(η) = η⁻¹ dF_{d−1}(½,…,½; 1,…,1; 1/η²)`.
pub fn j_bcc(d: u32, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    check_dimension(d)?;
    check_eta(eta)?;
    let spec = HypergeometricSpec::new(repeated(0.5, d).collect(), repeated(1.0, d - 1).collect(), 1.0 / (eta * eta))?;
    Ok(scaled(ghgf_eval_with(&spec, control)?, 1.0 / eta))
}

/// `J(d, η) = I(d − 1, η)/η` for real `d ≥ 1`.
pub fn continuous_j(d: f64, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    if !d.is_finite() || d < 1.0 {
        return Err(Error::domain(format!("dimension {d} must be >= 1")));
    }
    Ok(scaled(continuous_i(d - 1.0, eta, control)?, 1.0 / eta))
}

/// Green function of the ferromagnet on the hyper-bcc lattice.
///
/// Shares its series with [`j_bcc`]; the two differ only in their defining integrands.
pub fn g_bcc_ferro(d: u32, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    j_bcc(d, eta, control)
}

/// Leading `n_terms` terms `Σ_{m<n} [(½)_m/m!]^{d+1} η^{-2m}` of the large-`d` expansion.
pub fn asymptotic_i(d: f64, eta: f64, n_terms: usize) -> Result<f64> {
    check_eta(eta)?;
    if !(1..=ASYMPTOTIC_BASES.len()).contains(&n_terms) {
        return Err(Error::domain(format!("n_terms must be in 1..=8, got {n_terms}")));
    }
    let w = 1.0 / (eta * eta);
    Ok(ASYMPTOTIC_BASES[..n_terms]
        .iter()
        .enumerate()
        .map(|(m, base)| base.powf(d + 1.0) * w.powi(m as i32))
        .collect::<NeumaierSum>()
        .value())
}

/// Inner series `2F1(n+½, n+1; 1; 1/(4η²))` of the square-lattice sum.
fn sc2_inner(n: u64, eta: f64) -> Result<SeriesEvaluation> {
    let nf = n as f64;
    let spec = HypergeometricSpec::new(vec![nf + 0.5, nf + 1.0], vec![1.0], 0.25 / (eta * eta))?;
    ghgf_eval_with(&spec, &TruncationControl::tolerance(1e-15))
}

/// `Σ_n (½)_n / (n! (4η²)^n) · 2F1(n+½, n+1; 1; 1/(4η²))`.
///
/// The outer term ratio increases toward `(2η − 1)^{-2}`, which bounds the tail.
fn sc2_outer_sum(eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    if !(eta > 1.0) || !eta.is_finite() {
        return Err(Error::domain(format!("square-lattice sum needs eta > 1, got {eta}")));
    }
    let limit_ratio = (2.0 * eta - 1.0).powi(-2);
    let z = 0.25 / (eta * eta);
    let mut acc = NeumaierSum::new();
    let mut prefactor = 1.0_f64;
    let mut inner_error = 0.0;
    let mut n = 0u64;
    loop {
        let inner = sc2_inner(n, eta)?;
        let term = prefactor * inner.value;
        acc.add(term);
        inner_error += prefactor * inner.tail_bound;
        let tail = term * limit_ratio / (1.0 - limit_ratio);
        let done = match *control {
            TruncationControl::Fixed { terms } => n >= terms,
            TruncationControl::Tolerance { tolerance, max_terms } => {
                if tail <= tolerance * acc.value() {
                    true
                } else if n + 1 >= max_terms {
                    let partial = SeriesEvaluation {
                        value: acc.value(),
                        terms_used: n + 1,
                        last_term: term,
                        tail_bound: tail + inner_error,
                        tail_correction: 0.0,
                        convergence: ConvergenceClass::ConvergesAbsolutely,
                    };
                    return Err(Error::NotConverged { partial: Box::new(partial) });
                } else {
                    false
                }
            }
        };
        if done {
            return Ok(SeriesEvaluation {
                value: acc.value(),
                terms_used: n + 1,
                last_term: term,
                tail_bound: tail + inner_error,
                tail_correction: 0.0,
                convergence: ConvergenceClass::ConvergesAbsolutely,
            });
        }
        prefactor *= (n as f64 + 0.5) / (n as f64 + 1.0) * z;
        n += 1;
    }
}

/// Square-lattice Green function `G₂⁽¹⁾(η)` from its series in `2F1` functions.
pub fn g_sc2(eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    Ok(scaled(sc2_outer_sum(eta, control)?, 1.0 / eta))
}

/// Both sides of the identity between the square-lattice sum and `2F1(½,½;1;1/η²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummationCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
}

pub fn summation_formula_check(eta: f64) -> Result<SummationCheck> {
    let control = TruncationControl::tolerance(1e-12);
    let lhs = sc2_outer_sum(eta, &control)?.value;
    let rhs = i_bcc(1, eta, &control)?.value;
    Ok(SummationCheck { lhs, rhs, abs_diff: (lhs - rhs).abs() })
}

/// `π⁻¹ ∫₀^π (1 − cos x/η)^{-k} dx = 2F1((k+1)/2, k/2; 1; 1/η²)`.
pub fn a4_integral(k: u32, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    if k == 0 {
        return Err(Error::domain("power k must be at least 1"));
    }
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::domain(format!("eta = {eta} must be positive")));
    }
    if eta <= 1.0 {
        return Err(Error::DivergentSeries);
    }
    let kf = k as f64;
    let spec = HypergeometricSpec::new(vec![0.5 * (kf + 1.0), 0.5 * kf], vec![1.0], 1.0 / (eta * eta))?;
    ghgf_eval_with(&spec, control)
}

/// Panel layout for the Maradudin double integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaradudinConfig {
    /// Absolute agreement required between two successive panel refinements.
    pub tolerance: f64,
    pub nodes_per_panel: usize,
    pub max_panels: usize,
}

impl Default for MaradudinConfig {
    fn default() -> Self {
        Self { tolerance: 1e-11, nodes_per_panel: 24, max_panels: 512 }
    }
}

/// Maradudin double-integral form of the simple-cubic integrals for real `d`.
///
/// With `t = u²`, `s = v²` the two forms become
/// `(4d/π) ∫∫ e^{−ηd(u²+v²)} I₀(u²−v²)^d du dv` and
/// `4d² ∫∫ uv e^{−ηd(u²+v²)} I₀(u²−v²)^d du dv` over the quarter plane. Since
/// `I₀(x) ≤ e^{|x|}`, the integrand is below `e^{−d(η−1)(u²+v²)}`, which sets the cutoff.
pub fn maradudin_sc(d: f64, eta: f64, form: MaradudinForm, config: &MaradudinConfig) -> Result<QuadratureEstimate> {
    if !d.is_finite() || d < 1.0 {
        return Err(Error::domain(format!("dimension {d} must be >= 1")));
    }
    if !eta.is_finite() || eta <= 1.0 {
        return Err(Error::domain(format!("Maradudin forms need eta > 1, got {eta}")));
    }
    // e^{-46} ≈ 1e-20
    let radius = (46.0 / (d * (eta - 1.0))).sqrt();
    let integrand = |u: f64, v: f64| {
        let (t, s) = (u * u, v * v);
        let x = (t - s).abs();
        let log = d * (bessel_i0_scaled(x).ln() + x) - eta * d * (t + s);
        let weight = match form {
            MaradudinForm::Sqrt => 4.0 * d / std::f64::consts::PI,
            MaradudinForm::Sq => 4.0 * d * d * u * v,
        };
        weight * log.exp()
    };
    let (nodes, weights) = gauss_legendre(config.nodes_per_panel);
    let mut panels = 4;
    let mut previous = tensor_panels(&integrand, radius, panels, &nodes, &weights);
    let mut evaluations = (panels * config.nodes_per_panel).pow(2) as u64;
    loop {
        panels *= 2;
        let current = tensor_panels(&integrand, radius, panels, &nodes, &weights);
        evaluations += (panels * config.nodes_per_panel).pow(2) as u64;
        let error = (current - previous).abs();
        if error <= config.tolerance {
            return Ok(QuadratureEstimate { value: current, error, evaluations });
        }
        if panels >= config.max_panels {
            return Err(Error::QuadratureNotConverged { estimate: error, tolerance: config.tolerance });
        }
        previous = current;
    }
}

fn tensor_panels<F: Fn(f64, f64) -> f64>(f: &F, radius: f64, panels: usize, nodes: &[f64], weights: &[f64]) -> f64 {
    let h = radius / panels as f64;
    let points: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let center = (p as f64 + 0.5) * h;
            nodes.iter().zip(weights).map(move |(x, w)| (center + 0.5 * h * x, 0.5 * h * w))
        })
        .collect();
    let mut acc = NeumaierSum::new();
    for &(u, wu) in &points {
        for &(v, wv) in &points {
            acc.add(wu * wv * f(u, v));
        }
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate_adaptive, integrate_nested, AdaptiveRule};
    use crate::special::{elliptic_e, elliptic_k, EllipticModulus};
    use std::f64::consts::PI;

    const I2_AT_ONE: f64 = 1.3932039296856769;

    fn tol() -> TruncationControl {
        TruncationControl::tolerance(1e-14)
    }

    fn k_of(k: f64) -> f64 {
        elliptic_k(EllipticModulus::new(k).unwrap()).unwrap()
    }

    fn e_of(k: f64) -> f64 {
        elliptic_e(EllipticModulus::new(k).unwrap()).unwrap()
    }

    /// Average of a family's integrand over `[0, π]^d` by nested adaptive quadrature.
    fn cube_average(family: LatticeFamily, d: usize, eta: f64) -> f64 {
        let rule = AdaptiveRule::new(1e-10, 2000);
        let r = integrate_nested(|x| family.integrand(eta, x), &vec![0.0; d], &vec![PI; d], &rule).unwrap();
        r.value / PI.powi(d as i32)
    }

    #[test]
    fn family_names_round_trip() {
        for f in LatticeFamily::ALL {
            assert_eq!(f.name().parse::<LatticeFamily>().unwrap(), f);
        }
        assert_eq!("itilde".parse::<LatticeFamily>().unwrap(), LatticeFamily::Itilde);
        assert!("K".parse::<LatticeFamily>().is_err());
    }

    #[test]
    fn query_validation() {
        assert!(LatticeQuery::new(LatticeFamily::I, 2.5, 1.0).is_ok());
        assert!(LatticeQuery::new(LatticeFamily::Itilde, 2.5, 1.0).is_err());
        assert!(LatticeQuery::new(LatticeFamily::Gsc2, 3.0, 2.0).is_err());
        assert!(LatticeQuery::new(LatticeFamily::I, 0.5, 2.0).is_err());
        assert!(LatticeQuery::new(LatticeFamily::I, 2.0, 0.99).is_err());
        let q = LatticeQuery::new(LatticeFamily::I, 1.0, 1.0).unwrap();
        assert!(matches!(q.evaluate(&tol()), Err(Error::DivergentSeries)));
    }

    #[test]
    fn i_bcc_values() {
        let e = i_bcc(2, 1.0, &TruncationControl::tolerance(1e-10)).unwrap();
        assert!((e.value - I2_AT_ONE).abs() < 1e-9);
        for d in 1..=4 {
            assert!((i_bcc(d, 1e6, &tol()).unwrap().value - 1.0).abs() < 1e-11);
        }
        let e = i_bcc(1, 2.0, &tol()).unwrap();
        assert!((e.value - 2.0 / PI * k_of(0.5)).abs() < 1e-13);
        assert!((e.value - cube_average(LatticeFamily::I, 1, 2.0)).abs() < 1e-9);
        assert!(matches!(i_bcc(1, 1.0, &tol()), Err(Error::DivergentSeries)));
    }

    #[test]
    fn i_tilde_values() {
        let e = i_tilde(3, 1e6, &tol()).unwrap();
        assert!((e.value / 1e6 - 1.0).abs() < 1e-11);
        let e = i_tilde(1, 2.0, &tol()).unwrap();
        assert!((e.value - 4.0 / PI * e_of(0.5)).abs() < 1e-13);
        assert!((e.value - 1.8684309153353882).abs() < 1e-13);
        assert!((e.value - cube_average(LatticeFamily::Itilde, 1, 2.0)).abs() < 1e-9);
        // Finite at η = 1 even for d = 1, where the integrand is sin(x/2).
        let e = i_tilde(1, 1.0, &TruncationControl::tolerance(1e-10)).unwrap();
        assert!((e.value - 2.0 / PI).abs() < 1e-8, "{}", e.value);
    }

    #[test]
    fn i_tilde_eta_derivative_is_i() {
        let h = 1e-5;
        for d in 1..=3 {
            for eta in [1.2, 1.5, 2.0] {
                let fd = (i_tilde(d, eta + h, &tol()).unwrap().value - i_tilde(d, eta - h, &tol()).unwrap().value)
                    / (2.0 * h);
                let i = i_bcc(d, eta, &tol()).unwrap().value;
                assert!((fd - i).abs() < 1e-8, "d={d} eta={eta}: {fd} vs {i}");
            }
        }
    }

    #[test]
    fn j_tilde_forms_agree() {
        for d in 1..=3 {
            for eta in [1.1, 1.5, 2.0] {
                let a = j_tilde(d, eta, JtildeForm::Difference, &tol()).unwrap().value;
                let b = j_tilde(d, eta, JtildeForm::Shifted, &tol()).unwrap().value;
                assert!((a - b).abs() < 1e-10, "d={d} eta={eta}");
            }
        }
        let e = j_tilde(3, 1e6, JtildeForm::Shifted, &tol()).unwrap();
        assert!((e.value / 1.25e-7 - 1.0).abs() < 0.01);
        let oracle = cube_average(LatticeFamily::Jtilde, 2, 1.5);
        assert!((j_tilde(2, 1.5, JtildeForm::Shifted, &tol()).unwrap().value - oracle).abs() < 1e-6);
        assert!(matches!(j_tilde(1, 1.0, JtildeForm::Shifted, &tol()), Err(Error::DivergentSeries)));
    }

    #[test]
    fn j_bcc_values() {
        let e = j_bcc(1, 2.0, &tol()).unwrap();
        assert!((e.value - 1.0 / 3f64.sqrt()).abs() < 1e-13);
        assert!((e.value - cube_average(LatticeFamily::J, 1, 2.0)).abs() < 1e-9);
        let e = j_bcc(3, 1.0, &TruncationControl::tolerance(1e-10)).unwrap();
        assert!((e.value - I2_AT_ONE).abs() < 1e-9);
        assert!(matches!(j_bcc(2, 1.0, &tol()), Err(Error::DivergentSeries)));
        assert!(matches!(j_bcc(1, 1.0, &tol()), Err(Error::DivergentSeries)));
    }

    #[test]
    fn dimension_one_reductions() {
        for eta in [1.1, 2.0, 5.0] {
            let k = 1.0 / eta;
            assert!((i_bcc(1, eta, &tol()).unwrap().value - 2.0 / PI * k_of(k)).abs() < 1e-12);
            assert!((i_tilde(1, eta, &tol()).unwrap().value - 2.0 * eta / PI * e_of(k)).abs() < 1e-12);
            let elementary = 1.0 / (eta * (1.0 - k * k).sqrt());
            assert!((j_bcc(1, eta, &tol()).unwrap().value - elementary).abs() < 1e-12);
        }
    }

    #[test]
    fn connection_formula() {
        for d in 1..=4 {
            for eta in [1.005, 1.1, 2.0, 10.0] {
                let i = i_bcc(d, eta, &tol()).unwrap().value;
                let j = j_bcc(d + 1, eta, &tol()).unwrap().value;
                assert!(((i - eta * j) / i).abs() < 1e-12, "d={d} eta={eta}");
            }
        }
        for d in 2..=4 {
            let c = TruncationControl::tolerance(1e-9);
            let i = i_bcc(d, 1.0, &c).unwrap().value;
            let j = j_bcc(d + 1, 1.0, &c).unwrap().value;
            assert_eq!(i, j);
        }
    }

    #[test]
    fn continuous_j_matches_integer_j() {
        for d in 1..=4 {
            for eta in [1.1, 2.0] {
                let a = continuous_j(d as f64, eta, &tol()).unwrap().value;
                let b = j_bcc(d, eta, &tol()).unwrap().value;
                assert!(((a - b) / b).abs() < 1e-12, "d={d} eta={eta}");
            }
        }
        let q = LatticeQuery::new(LatticeFamily::J, 1.5, 1.0).unwrap();
        assert!(matches!(q.evaluate(&TruncationControl::tolerance(1e-8)), Err(Error::DivergentSeries)));
        let q = LatticeQuery::new(LatticeFamily::J, 3.5, 1.0).unwrap();
        assert!(q.evaluate(&TruncationControl::tolerance(1e-8)).unwrap().value > 1.0);
    }

    #[test]
    fn ferro_green_function() {
        let c = tol();
        assert_eq!(g_bcc_ferro(3, 1.2, &c).unwrap(), j_bcc(3, 1.2, &c).unwrap());
        assert!((g_bcc_ferro(1, 2.0, &c).unwrap().value - 1.0 / 3f64.sqrt()).abs() < 1e-13);
        let oracle = cube_average(LatticeFamily::Gferro, 2, 1.5);
        assert!((g_bcc_ferro(2, 1.5, &c).unwrap().value - oracle).abs() < 1e-6);
    }

    #[test]
    fn asymptotic_expansion() {
        assert_eq!(asymptotic_i(3.0, 1.0, 1).unwrap(), 1.0);
        for (m, base) in ASYMPTOTIC_BASES.iter().enumerate() {
            let root = crate::hyperseries::pochhammer(0.5, m as u64) / crate::hyperseries::pochhammer(1.0, m as u64);
            assert!((base - root).abs() < 1e-16, "m = {m}");
        }
        let full = continuous_i(20.0, 1.0, &tol()).unwrap().value;
        assert!((asymptotic_i(20.0, 1.0, 8).unwrap() - full).abs() < 1e-10);
        assert!(asymptotic_i(2.0, 1.0, 0).is_err());
        assert!(asymptotic_i(2.0, 1.0, 9).is_err());
    }

    #[test]
    fn asymptotic_remainder_against_first_omitted_term() {
        // Every omitted term is positive, so the remainder exceeds the first of them; the
        // ratio falls toward 1 as the higher terms die off with d. The remainder is summed
        // directly because it drops below the resolution of I − 1 at large d.
        use crate::hyperseries::beta_coefficient;
        let mut last_ratio = f64::INFINITY;
        for d in [10.0, 15.0, 25.0, 40.0] {
            let remainder: f64 = (8..200).map(|m| beta_coefficient(d, m)).sum();
            let ratio = remainder / beta_coefficient(d, 8);
            assert!(ratio >= 1.0 && ratio < last_ratio, "d = {d}: ratio {ratio}");
            last_ratio = ratio;
        }
        assert!(last_ratio < 1.15);
        let full = continuous_i(10.0, 1.0, &tol()).unwrap().value;
        let direct: f64 = (8..200).map(|m| beta_coefficient(10.0, m)).sum();
        assert!(((full - asymptotic_i(10.0, 1.0, 8).unwrap()) / direct - 1.0).abs() < 1e-6);
    }

    #[test]
    fn large_dimension_limit() {
        let c = TruncationControl::tolerance(1e-14);
        let v = continuous_i(25.0, 1.0, &c).unwrap().value - 1.0;
        assert!(v > 0.0 && v < 1e-7);
        for d in [3.0, 6.0, 12.0] {
            for eta in [1.0, 1.5] {
                let excess = continuous_i(d, eta, &c).unwrap().value - 1.0;
                let leading = 0.5_f64.powf(d + 1.0) / (eta * eta);
                assert!(excess >= leading && excess <= 2.0 * leading, "d={d} eta={eta}");
            }
        }
    }

    #[test]
    fn square_lattice_green_function() {
        let e = g_sc2(1e3, &tol()).unwrap();
        assert!((1e3 * e.value - 1.0).abs() < 1e-5);
        let e = g_sc2(2.0, &tol()).unwrap();
        let rhs = 0.5 * i_bcc(1, 2.0, &tol()).unwrap().value;
        assert!((e.value - rhs).abs() < 1e-10);
        let oracle = cube_average(LatticeFamily::Gsc2, 2, 1.5);
        assert!((g_sc2(1.5, &tol()).unwrap().value - oracle).abs() < 1e-6);
        assert!(g_sc2(1.0, &tol()).is_err());
    }

    #[test]
    fn summation_formula() {
        let c = summation_formula_check(2.0).unwrap();
        assert!(c.abs_diff < 1e-10, "{c:?}");
        let c = summation_formula_check(1.1).unwrap();
        assert!(c.abs_diff < 1e-8, "{c:?}");
        let c = summation_formula_check(1e4).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-8 && (c.rhs - 1.0).abs() < 1e-8);
    }

    #[test]
    fn a4_against_one_dimensional_quadrature() {
        let e = a4_integral(1, 2.0, &tol()).unwrap();
        assert!((e.value - (0.75_f64).powf(-0.5)).abs() < 1e-13);
        let rule = AdaptiveRule::new(1e-13, 500);
        for k in 1..=3 {
            for eta in [1.5, 2.0] {
                let q = integrate_adaptive(|x: f64| (1.0 - x.cos() / eta).powi(-(k as i32)), 0.0, PI, &rule).unwrap();
                let s = a4_integral(k, eta, &tol()).unwrap().value;
                assert!((s - q.value / PI).abs() < 1e-8, "k={k} eta={eta}");
            }
        }
        assert!((a4_integral(3, 1e7, &tol()).unwrap().value - 1.0).abs() < 1e-12);
        assert!(matches!(a4_integral(2, 1.0, &tol()), Err(Error::DivergentSeries)));
    }

    #[test]
    fn maradudin_forms_at_dimension_one() {
        let config = MaradudinConfig::default();
        let eta: f64 = 2.0;
        let sq = maradudin_sc(1.0, eta, MaradudinForm::Sq, &config).unwrap();
        let exact_sq = 1.0 / (eta * (eta * eta - 1.0).sqrt());
        assert!((sq.value - exact_sq).abs() < 1e-9, "{} vs {exact_sq}", sq.value);
        let sqrt = maradudin_sc(1.0, eta, MaradudinForm::Sqrt, &config).unwrap();
        let exact_sqrt = 2.0 / (PI * eta) * k_of(1.0 / eta);
        assert!((sqrt.value - exact_sqrt).abs() < 1e-9, "{} vs {exact_sqrt}", sqrt.value);
    }

    #[test]
    fn maradudin_forms_against_cube_averages() {
        let config = MaradudinConfig::default();
        let sqrt = maradudin_sc(2.0, 1.5, MaradudinForm::Sqrt, &config).unwrap().value;
        assert!((sqrt - cube_average(LatticeFamily::MaradudinSqrt, 2, 1.5)).abs() < 1e-5);
        let sq = maradudin_sc(2.0, 50.0, MaradudinForm::Sq, &config).unwrap().value;
        assert!((2500.0 * sq - 1.0).abs() < 1e-2);
        assert!(maradudin_sc(2.0, 1.0, MaradudinForm::Sq, &config).is_err());
    }

    #[test]
    fn maradudin_real_dimension_interpolates() {
        let config = MaradudinConfig::default();
        let at = |d: f64| maradudin_sc(d, 1.5, MaradudinForm::Sq, &config).unwrap().value;
        let (a, b, c) = (at(2.0), at(2.5), at(3.0));
        assert!(a > b && b > c, "{a} {b} {c}");
    }
}
