//! Generalized hypergeometric series in the variable `w = 1/η²`.
//!
//! Two families are summed here:
//!
//! * `pFq(a₁…a_p; b₁…b_q; w) = Σ_m Π(aᵢ)_m / [Π(bⱼ)_m · m!] · wᵐ`, generated by its
//!   term-ratio recurrence ([`ghgf_eval`]);
//! * the continuous-dimension family `I(d, η) = Σ_m β(d, m) wᵐ` with
//!   `β(d, m) = [(½)_m / (1)_m]^{d+1}`, generated in log space ([`continuous_i`]).
//!
//! All accumulation is compensated. For `w < 1` the omitted tail is bounded by a
//! geometric series using the supremum of the term ratio beyond the cut. At `w = 1`
//! terms decay like `m^{-(1+s)}` with `s = Σb − Σa`, and the tail is estimated by the
//! first Euler–Maclaurin correction `t_M (M/s − ½)`. In tolerance mode that estimate is
//! added to the partial sum; the residual error after correction is `O(t_M / s)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::NeumaierSum;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: u64 = 10_000_000;
/// Truncation order used for the published continuous-dimension curves.
pub const DEFAULT_FIXED_TERMS: u64 = 10_000;

/// Minimum number of terms before an unit-argument tail estimate is trusted.
const MIN_POWER_LAW_TERMS: u64 = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricSpec {
    numerator: Vec<f64>,
    denominator: Vec<f64>,
    argument: f64,
}

impl HypergeometricSpec {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>, argument: f64) -> Result<Self> {
        if let Some(&b) = denominator.iter().find(|&&b| is_nonpositive_integer(b)) {
            return Err(Error::InvalidDenominatorParam(b));
        }
        if !argument.is_finite() || argument < 0.0 {
            return Err(Error::domain(format!("argument {argument} must be finite and non-negative")));
        }
        if numerator.iter().chain(&denominator).any(|x| !x.is_finite()) {
            return Err(Error::domain("parameters must be finite"));
        }
        Ok(Self { numerator, denominator, argument })
    }

    /// `(d+1)F_d(½,…,½; 1,…,1; 1/η²)`, the bcc antiferromagnet integral `I_d(η)`.
    pub fn watson_i(d: u32, eta: f64) -> Result<Self> {
        let d = d as usize;
        Self::new(vec![0.5; d + 1], vec![1.0; d], inverse_square(eta)?)
    }

    pub fn numerator(&self) -> &[f64] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[f64] {
        &self.denominator
    }

    pub fn argument(&self) -> f64 {
        self.argument
    }

    /// `Σbⱼ − Σaᵢ`; at unit argument the series converges iff this is positive.
    pub fn parameter_excess(&self) -> f64 {
        self.denominator.iter().sum::<f64>() - self.numerator.iter().sum::<f64>()
    }

    /// Shape of the terms at unit argument, see [`PowerLawShape`].
    fn power_law_shape(&self) -> PowerLawShape {
        let moment = |k: i32| {
            let num: f64 = self.numerator.iter().map(|x| x.powi(k)).sum();
            let den: f64 = self.denominator.iter().map(|x| x.powi(k)).sum();
            num - den - 1.0
        };
        PowerLawShape::from_moments(self.parameter_excess(), moment(2), moment(3))
    }

    /// The index after which all terms vanish, if some numerator is a non-positive integer.
    pub fn terminates_after(&self) -> Option<u64> {
        self.numerator
            .iter()
            .filter(|&&a| is_nonpositive_integer(a))
            .map(|&a| (-a) as u64)
            .min()
    }

    /// `term_{m+1} / term_m`.
    #[inline]
    pub fn term_ratio(&self, m: u64) -> f64 {
        let m = m as f64;
        let num: f64 = self.numerator.iter().map(|a| a + m).product();
        let den: f64 = self.denominator.iter().map(|b| b + m).product();
        num / (den * (m + 1.0)) * self.argument
    }

    /// Term `m` from Pochhammer products; independent of the ratio recurrence.
    pub fn term(&self, m: u64) -> f64 {
        let num: f64 = self.numerator.iter().map(|&a| pochhammer(a, m)).product();
        let den: f64 = self.denominator.iter().map(|&b| pochhammer(b, m)).product();
        num / (den * pochhammer(1.0, m)) * self.argument.powi(m as i32)
    }

    fn terms(&self) -> GhgfTerms<'_> {
        GhgfTerms { spec: self, m: 0, term: 1.0, stop_after: self.terminates_after() }
    }

    /// Upper bound on `|term_{m+1}/term_m|` over all `m ≥ cut`, or `None` when no
    /// bound below one is available yet.
    fn sup_ratio_from(&self, cut: u64) -> Option<f64> {
        let m = cut as f64;
        let mut num: Vec<f64> = self.numerator.clone();
        let mut den: Vec<f64> = self.denominator.clone();
        den.push(1.0);
        if num.len() > den.len() || num.iter().chain(&den).any(|&x| x + m <= 0.0) {
            return None;
        }
        num.sort_by(f64::total_cmp);
        den.sort_by(f64::total_cmp);
        // Pair each numerator with a denominator factor; (a+m)/(c+m) is monotone in m
        // and tends to one, so its supremum is max(1, value at the cut).
        let mut bound = self.argument;
        for (a, c) in num.iter().zip(&den) {
            bound *= ((a + m) / (c + m)).max(1.0);
        }
        for c in &den[num.len()..] {
            bound /= c + m;
        }
        (bound < 1.0).then_some(bound)
    }
}

struct GhgfTerms<'a> {
    spec: &'a HypergeometricSpec,
    m: u64,
    term: f64,
    stop_after: Option<u64>,
}

impl Iterator for GhgfTerms<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.stop_after.is_some_and(|last| self.m > last) {
            return None;
        }
        let current = self.term;
        self.term *= self.spec.term_ratio(self.m);
        self.m += 1;
        Some(current)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConvergenceClass {
    ConvergesAbsolutely,
    ConvergesAtUnitArgument,
    Divergent,
}

/// Result of summing a series.
///
/// `tail_bound` estimates `|exact − value|`. In fixed-truncation mode `value` is the raw
/// partial sum; in tolerance mode at unit argument it already includes
/// `tail_correction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEvaluation {
    pub value: f64,
    pub terms_used: u64,
    pub last_term: f64,
    pub tail_bound: f64,
    pub tail_correction: f64,
    pub convergence: ConvergenceClass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationControl {
    /// Sum exactly the terms `m = 0..=terms` with no tail correction.
    Fixed { terms: u64 },
    /// Sum until the estimated relative error falls below `tolerance`.
    Tolerance { tolerance: f64, max_terms: u64 },
}

impl TruncationControl {
    pub fn tolerance(tolerance: f64) -> Self {
        TruncationControl::Tolerance { tolerance, max_terms: DEFAULT_MAX_TERMS }
    }

    pub fn fixed(terms: u64) -> Self {
        TruncationControl::Fixed { terms }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TruncationControl::Tolerance { tolerance, max_terms } => {
                if !(tolerance > 0.0) {
                    return Err(Error::domain("tolerance must be positive"));
                }
                if max_terms == 0 {
                    return Err(Error::domain("max_terms must be positive"));
                }
            }
            TruncationControl::Fixed { .. } => {}
        }
        Ok(())
    }
}

impl Default for TruncationControl {
    fn default() -> Self {
        TruncationControl::tolerance(DEFAULT_TOLERANCE)
    }
}

/// Rising factorial `(a)_m` by the product recurrence.
pub fn pochhammer(a: f64, m: u64) -> f64 {
    let mut acc = 1.0;
    for k in 0..m {
        acc *= a + k as f64;
    }
    acc
}

pub fn classify_convergence(spec: &HypergeometricSpec) -> Result<ConvergenceClass> {
    if let Some(&b) = spec.denominator.iter().find(|&&b| is_nonpositive_integer(b)) {
        return Err(Error::InvalidDenominatorParam(b));
    }
    let p = spec.numerator.len();
    let q = spec.denominator.len();
    let w = spec.argument;
    let class = if spec.terminates_after().is_some() || w == 0.0 || p <= q {
        ConvergenceClass::ConvergesAbsolutely
    } else if p > q + 1 || w > 1.0 {
        ConvergenceClass::Divergent
    } else if w < 1.0 {
        ConvergenceClass::ConvergesAbsolutely
    } else if spec.parameter_excess() > 0.0 {
        ConvergenceClass::ConvergesAtUnitArgument
    } else {
        ConvergenceClass::Divergent
    };
    Ok(class)
}

/// Raabe-test classification of the continuous-dimension series `Σ β(d,m) η^{-2m}`.
///
/// For `η > 1` the term ratio tends to `1/η² < 1`, so every real `d ≥ 0` converges;
/// at `η = 1` convergence needs `(d+1)/2 > 1`.
pub fn classify_continuous(d: f64, eta: f64) -> Result<ConvergenceClass> {
    check_eta(eta)?;
    if !d.is_finite() || d < 0.0 {
        return Err(Error::domain(format!("dimension {d} must be finite and non-negative")));
    }
    Ok(if eta > 1.0 {
        ConvergenceClass::ConvergesAbsolutely
    } else if (d + 1.0) / 2.0 > 1.0 {
        ConvergenceClass::ConvergesAtUnitArgument
    } else {
        ConvergenceClass::Divergent
    })
}

/// Sums a `pFq` series to relative `tolerance`.
pub fn ghgf_eval(spec: &HypergeometricSpec, tolerance: f64, max_terms: u64) -> Result<SeriesEvaluation> {
    ghgf_eval_with(spec, &TruncationControl::Tolerance { tolerance, max_terms })
}

pub fn ghgf_eval_with(spec: &HypergeometricSpec, control: &TruncationControl) -> Result<SeriesEvaluation> {
    control.validate()?;
    let class = classify_convergence(spec)?;
    let terminating = spec.terminates_after().is_some();
    match class {
        ConvergenceClass::Divergent => Err(Error::DivergentSeries),
        ConvergenceClass::ConvergesAbsolutely => {
            let min_terms = spec
                .numerator
                .iter()
                .chain(&spec.denominator)
                .fold(1.0_f64, |acc, &x| acc.max(1.0 - x))
                .ceil() as u64;
            sum_terms(spec.terms().map(Term::from), control, class, min_terms, |cut, t| {
                if terminating && t.value == 0.0 {
                    return TailEstimate::exact();
                }
                match spec.sup_ratio_from(cut) {
                    Some(r) => TailEstimate::geometric(t.value, r),
                    None => TailEstimate::unknown(),
                }
            })
        }
        ConvergenceClass::ConvergesAtUnitArgument => {
            let shape = spec.power_law_shape();
            let largest = spec
                .numerator
                .iter()
                .chain(&spec.denominator)
                .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
            let min_terms = MIN_POWER_LAW_TERMS + (4.0 * largest).ceil() as u64;
            sum_terms(spec.terms().map(Term::from), control, class, min_terms, |cut, t| {
                TailEstimate::power_law(cut, t.value, &shape)
            })
        }
    }
}

/// `β(d, m) = [(½)_m / (1)_m]^{d+1}`, evaluated in log space.
pub fn beta_coefficient(d: f64, m: u64) -> f64 {
    ((d + 1.0) * log_half_ratio(m)).exp()
}

/// `ln[(½)_m / (1)_m] = ln[Γ(m+½) / (Γ(m+1)√π)]`, accumulated from `ln((k+½)/(k+1))`.
pub fn log_half_ratio(m: u64) -> f64 {
    let mut acc = NeumaierSum::new();
    for k in 0..m {
        acc.add(ln_half_step(k));
    }
    acc.value()
}

#[inline]
fn ln_half_step(k: u64) -> f64 {
    (-0.5 / (k as f64 + 1.0)).ln_1p()
}

/// Yields `(ln[(½)_m/(1)_m], m)` for `m = 0, 1, …`.
struct LogHalfRatios {
    m: u64,
    acc: NeumaierSum,
}

impl LogHalfRatios {
    fn new() -> Self {
        Self { m: 0, acc: NeumaierSum::new() }
    }
}

impl Iterator for LogHalfRatios {
    type Item = (f64, u64);

    fn next(&mut self) -> Option<(f64, u64)> {
        let item = (self.acc.value(), self.m);
        self.acc.add(ln_half_step(self.m));
        self.m += 1;
        Some(item)
    }
}

/// `I(d, η) = Σ_m β(d,m) η^{-2m}` for real `d`.
pub fn continuous_i(d: f64, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    control.validate()?;
    let class = classify_continuous(d, eta)?;
    let w = 1.0 / (eta * eta);
    let ln_w = w.ln();
    let power = d + 1.0;
    let terms = LogHalfRatios::new().map(move |(log_ratio, m)| Term {
        value: (power * log_ratio + m as f64 * ln_w).exp(),
        log_ratio,
    });
    match class {
        ConvergenceClass::Divergent => Err(Error::DivergentSeries),
        // ((m+½)/(m+1))^{d+1} < 1 for d > −1, so the ratio never exceeds w.
        ConvergenceClass::ConvergesAbsolutely => {
            sum_terms(terms, control, class, 1, |_, t| TailEstimate::geometric(t.value, w))
        }
        ConvergenceClass::ConvergesAtUnitArgument => {
            // d + 1 parameters ½ over d + 1 parameters 1.
            let shape = PowerLawShape::from_moments((d - 1.0) / 2.0, -0.75 * power, -0.875 * power);
            let min_terms = MIN_POWER_LAW_TERMS + (4.0 * shape.a.abs()).ceil() as u64;
            sum_terms(terms, control, class, min_terms, |cut, t| {
                TailEstimate::power_law(cut, t.value, &shape)
            })
        }
    }
}

/// `∂I(d, η)/∂d = Σ_m β(d,m) ln[(½)_m/(1)_m] η^{-2m}`.
pub fn continuous_i_dd(d: f64, eta: f64, control: &TruncationControl) -> Result<SeriesEvaluation> {
    control.validate()?;
    let class = classify_continuous(d, eta)?;
    let w = 1.0 / (eta * eta);
    let ln_w = w.ln();
    let power = d + 1.0;
    let terms = LogHalfRatios::new().map(move |(log_ratio, m)| Term {
        value: log_ratio * (power * log_ratio + m as f64 * ln_w).exp(),
        log_ratio,
    });
    match class {
        ConvergenceClass::Divergent => Err(Error::DivergentSeries),
        ConvergenceClass::ConvergesAbsolutely => sum_terms(terms, control, class, 2, |cut, t| {
            // |L_{m+1}/L_m| ≤ 1 + 1/((2m+1)|L_m|), and |L_m| grows with m.
            let growth = 1.0 + 1.0 / ((2.0 * cut as f64 + 1.0) * t.log_ratio.abs());
            TailEstimate::geometric(t.value, w * growth)
        }),
        ConvergenceClass::ConvergesAtUnitArgument => {
            let s = (d - 1.0) / 2.0;
            sum_terms(terms, control, class, MIN_POWER_LAW_TERMS, |cut, t| {
                let beta = t.value / t.log_ratio;
                let m = cut as f64;
                // ∫_M^∞ C x^{-1-s} (L_M − ½ ln(x/M)) dx − f(M)/2
                let correction = beta * m / s * (t.log_ratio - 0.5 / s) - 0.5 * t.value;
                let residual = beta.abs() * (t.log_ratio.abs() + 1.0 / s) * (0.5 + 0.5 / s);
                TailEstimate { correction, residual }
            })
        }
    }
}

/// A series term together with `ln[(½)_m/(1)_m]` where the family has one.
#[derive(Debug, Clone, Copy)]
struct Term {
    value: f64,
    log_ratio: f64,
}

impl From<f64> for Term {
    fn from(value: f64) -> Self {
        Term { value, log_ratio: 0.0 }
    }
}

#[derive(Debug, Clone, Copy)]
struct TailEstimate {
    /// Signed estimate of the omitted tail (added to the sum in tolerance mode).
    correction: f64,
    /// Error remaining after the correction is applied.
    residual: f64,
}

impl TailEstimate {
    fn exact() -> Self {
        Self { correction: 0.0, residual: 0.0 }
    }

    fn unknown() -> Self {
        Self { correction: 0.0, residual: f64::INFINITY }
    }

    fn geometric(term: f64, ratio: f64) -> Self {
        if ratio >= 1.0 {
            return Self::unknown();
        }
        Self { correction: 0.0, residual: term.abs() * ratio / (1.0 - ratio) }
    }

    /// Tail `Σ_{m>M} t_m` by Euler–Maclaurin on `C x^{-p} (1 + a/x + c/x²)`.
    fn power_law(cut: u64, term: f64, shape: &PowerLawShape) -> Self {
        let m = cut as f64;
        let PowerLawShape { s, a, c } = *shape;
        let p = 1.0 + s;
        let integral = (m / s + a / p + c / ((p + 1.0) * m)) / (1.0 + a / m + c / (m * m));
        // The unknown m^{-3} coefficient enters through C, amplified by 1/s.
        let size = 1.0 + p + a.abs() + c.abs();
        Self {
            correction: term * (integral - 0.5 + p / (12.0 * m)),
            residual: term.abs() * size * size * (1.0 + 1.0 / s) / (m * m),
        }
    }
}

/// `t_m ~ C m^{-1-s} (1 + a/m + c/m²)` for a `(q+1)Fq` series at unit argument.
#[derive(Debug, Clone, Copy)]
struct PowerLawShape {
    s: f64,
    a: f64,
    c: f64,
}

impl PowerLawShape {
    /// From the excess `s` and the moments `Σa_i^k − Σb_j^k − 1` (the `−1` for `m!`).
    ///
    /// Matches `ln(t_{m+1}/t_m) = Σ_k (−1)^{k+1} moment_k / (k m^k)` order by order.
    fn from_moments(s: f64, second: f64, third: f64) -> Self {
        let p = 1.0 + s;
        let a = 0.5 * (p + second);
        let l3 = third / 3.0;
        let c = 0.5 * a * a + 0.5 * (a - p / 3.0 - l3);
        Self { s, a, c }
    }
}

fn sum_terms<I, T>(
    terms: I,
    control: &TruncationControl,
    convergence: ConvergenceClass,
    min_terms: u64,
    mut tail: T,
) -> Result<SeriesEvaluation>
where
    I: Iterator<Item = Term>,
    T: FnMut(u64, Term) -> TailEstimate,
{
    let mut acc = NeumaierSum::new();
    let mut count: u64 = 0;
    let mut last = Term::from(0.0);
    match *control {
        TruncationControl::Fixed { terms: cut } => {
            let mut exhausted = true;
            for t in terms {
                acc.add(t.value);
                last = t;
                count += 1;
                if count > cut {
                    exhausted = false;
                    break;
                }
            }
            let est = if exhausted { TailEstimate::exact() } else { tail(count - 1, last) };
            Ok(SeriesEvaluation {
                value: acc.value(),
                terms_used: count,
                last_term: last.value,
                tail_bound: est.correction.abs() + est.residual,
                tail_correction: 0.0,
                convergence,
            })
        }
        TruncationControl::Tolerance { tolerance, max_terms } => {
            let mut est = TailEstimate::unknown();
            let mut terms = terms.peekable();
            while let Some(t) = terms.next() {
                acc.add(t.value);
                last = t;
                count += 1;
                if terms.peek().is_none() {
                    est = TailEstimate::exact();
                    break;
                }
                if count >= min_terms {
                    est = tail(count - 1, last);
                    let value = acc.value() + est.correction;
                    if est.residual <= tolerance * value.abs().max(f64::MIN_POSITIVE) {
                        break;
                    }
                }
                if count >= max_terms {
                    let partial = SeriesEvaluation {
                        value: acc.value() + est.correction,
                        terms_used: count,
                        last_term: last.value,
                        tail_bound: est.residual,
                        tail_correction: est.correction,
                        convergence,
                    };
                    return Err(Error::NotConverged { partial: Box::new(partial) });
                }
            }
            Ok(SeriesEvaluation {
                value: acc.value() + est.correction,
                terms_used: count,
                last_term: last.value,
                tail_bound: est.residual,
                tail_correction: est.correction,
                convergence,
            })
        }
    }
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if !eta.is_finite() || eta < 1.0 {
        return Err(Error::domain(format!("anisotropy eta = {eta} must be finite and >= 1")));
    }
    Ok(())
}

pub(crate) fn inverse_square(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(1.0 / (eta * eta))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `I₂(1) = Γ(¼)⁴ / (4π³)`, evaluated to 30 digits with an independent
    /// arbitrary-precision Γ and rounded to f64.
    const I2_AT_ONE: f64 = 1.3932039296856769;

    /// `(2/π) K(k)` by a bare AGM loop; independent of the series engine.
    fn two_over_pi_k(k: f64) -> f64 {
        let (mut a, mut b) = (1.0_f64, (1.0 - k * k).sqrt());
        for _ in 0..50 {
            let next = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = next;
        }
        1.0 / a
    }

    fn brute_partial_sum(a: &[f64], b: &[f64], w: f64, terms: usize) -> f64 {
        (0..terms as u64)
            .map(|m| {
                let num: f64 = a.iter().map(|&x| pochhammer(x, m)).product();
                let den: f64 = b.iter().map(|&x| pochhammer(x, m)).product();
                num / den / pochhammer(1.0, m) * w.powi(m as i32)
            })
            .sum()
    }

    fn spec(a: &[f64], b: &[f64], w: f64) -> HypergeometricSpec {
        HypergeometricSpec::new(a.to_vec(), b.to_vec(), w).unwrap()
    }

    fn tol() -> TruncationControl {
        TruncationControl::default()
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(0.5, 0), 1.0);
        assert_eq!(pochhammer(1.0, 5), 120.0);
        assert_eq!(pochhammer(0.5, 2), 0.75);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn classify_examples() {
        let i2 = HypergeometricSpec::watson_i(2, 2.0).unwrap();
        assert_eq!(classify_convergence(&i2).unwrap(), ConvergenceClass::ConvergesAbsolutely);
        let i1 = HypergeometricSpec::watson_i(1, 1.0).unwrap();
        assert_eq!(i1.parameter_excess(), 0.0);
        assert_eq!(classify_convergence(&i1).unwrap(), ConvergenceClass::Divergent);
        let i2_unit = HypergeometricSpec::watson_i(2, 1.0).unwrap();
        assert_eq!(i2_unit.parameter_excess(), 0.5);
        assert_eq!(classify_convergence(&i2_unit).unwrap(), ConvergenceClass::ConvergesAtUnitArgument);
    }

    #[test]
    fn invalid_denominators_are_rejected() {
        for b in [0.0, -1.0, -3.0] {
            let err = HypergeometricSpec::new(vec![0.5], vec![b], 0.5).unwrap_err();
            assert!(matches!(err, Error::InvalidDenominatorParam(x) if x == b));
        }
        assert!(HypergeometricSpec::new(vec![0.5], vec![-0.5], 0.5).is_ok());
    }

    #[test]
    fn raabe_rule_matches_parameter_excess_at_integer_d() {
        for d in 1..=8u32 {
            let by_excess = classify_convergence(&HypergeometricSpec::watson_i(d, 1.0).unwrap()).unwrap();
            let by_raabe = classify_continuous(d as f64, 1.0).unwrap();
            assert_eq!(by_excess, by_raabe, "d = {d}");
        }
    }

    #[test]
    fn ghgf_at_zero_argument() {
        let e = ghgf_eval(&spec(&[0.5, 0.5], &[1.0], 0.0), 1e-12, 100).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(e.terms_used >= 1);
        assert_eq!(e.tail_bound, 0.0);
    }

    #[test]
    fn ghgf_binomial_series() {
        let e = ghgf_eval(&spec(&[0.5], &[], 0.75), 1e-14, 10_000).unwrap();
        let closed = (1.0_f64 - 0.75).powf(-0.5);
        assert!((e.value - closed).abs() < 1e-13, "{}", e.value);
        assert!((e.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn ghgf_gauss_quarter_against_agm_and_brute_force() {
        let e = ghgf_eval(&spec(&[0.5, 0.5], &[1.0], 0.25), 1e-15, 10_000).unwrap();
        let agm = two_over_pi_k(0.5);
        let brute = brute_partial_sum(&[0.5, 0.5], &[1.0], 0.25, 60);
        assert!((e.value - agm).abs() < 1e-14, "{} vs {agm}", e.value);
        assert!((e.value - brute).abs() < 1e-13);
        assert!((e.value - 1.07318).abs() < 5e-6);
    }

    #[test]
    fn ghgf_tail_bound_covers_true_error() {
        let s = spec(&[0.5, 0.5], &[1.0], 0.81);
        let exact = two_over_pi_k(0.9);
        for cut in [5, 20, 80] {
            let e = ghgf_eval_with(&s, &TruncationControl::fixed(cut)).unwrap();
            assert!((exact - e.value).abs() <= e.tail_bound, "cut {cut}");
            assert!(e.tail_bound < 5.0 * (exact - e.value).abs() + 1e-15, "bound too loose at cut {cut}");
        }
    }

    #[test]
    fn ghgf_terminating_series_is_exact() {
        // 2F1(−3, 1; 1; w) = (1 − w)³
        let e = ghgf_eval(&spec(&[-3.0, 1.0], &[1.0], 0.4), 1e-14, 100).unwrap();
        assert!((e.value - 0.6_f64.powi(3)).abs() < 1e-15);
        assert_eq!(e.tail_bound, 0.0);
        assert_eq!(e.terms_used, 4);
    }

    #[test]
    fn ghgf_divergent_and_not_converged() {
        let i1 = HypergeometricSpec::watson_i(1, 1.0).unwrap();
        assert!(matches!(ghgf_eval(&i1, 1e-10, 1000), Err(Error::DivergentSeries)));
        let slow = spec(&[0.5, 0.5], &[1.0], 0.999);
        match ghgf_eval(&slow, 1e-15, 50) {
            Err(Error::NotConverged { partial }) => {
                assert_eq!(partial.terms_used, 50);
                assert!(partial.value > 1.0);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
        assert!(ghgf_eval(&slow, 0.0, 50).is_err());
    }

    #[test]
    fn ghgf_unit_argument_with_tail_correction() {
        let e = ghgf_eval(&HypergeometricSpec::watson_i(2, 1.0).unwrap(), 1e-9, DEFAULT_MAX_TERMS).unwrap();
        assert_eq!(e.convergence, ConvergenceClass::ConvergesAtUnitArgument);
        assert!((e.value - I2_AT_ONE).abs() < 1e-8, "{}", e.value);
        assert!(e.tail_correction > 0.0);
    }

    #[test]
    fn power_law_shape_of_half_over_one() {
        // (½)_m/m! ~ (πm)^{-1/2} (1 − 1/(8m) + 1/(128m²))
        let shape = spec(&[0.5], &[], 1.0).power_law_shape();
        assert!((shape.s + 0.5).abs() < 1e-15);
        assert!((shape.a + 0.125).abs() < 1e-15);
        assert!((shape.c - 1.0 / 128.0).abs() < 1e-15);
        let m = 100u64;
        let model = (std::f64::consts::PI * m as f64).powf(-0.5) * (1.0 + shape.a / m as f64 + shape.c / (m * m) as f64);
        assert!((pochhammer(0.5, m) / pochhammer(1.0, m) / model - 1.0).abs() < 1e-8);
    }

    #[test]
    fn unit_argument_bound_covers_error_near_divergence() {
        // Head summed exactly, tail by quadrature plus Euler–Maclaurin, at 25 digits.
        let reference = [(1.01, 64.36447709072555), (1.1, 7.074073146644250), (1.5, 2.003899716771387)];
        for (d, exact) in reference {
            for tol in [1e-8, 1e-10, 1e-12] {
                let e = continuous_i(d, 1.0, &TruncationControl::tolerance(tol)).unwrap();
                let err = (e.value - exact).abs();
                assert!(err <= e.tail_bound + 4e-16 * exact, "d={d} tol={tol}: err {err:.2e} bound {:.2e}", e.tail_bound);
            }
        }
    }

    #[test]
    fn beta_coefficient_values() {
        for d in [1.0, 1.5, 2.0, 7.3] {
            assert_eq!(beta_coefficient(d, 0), 1.0);
            let b1 = beta_coefficient(d, 1);
            assert!((b1 / 0.5_f64.powf(d + 1.0) - 1.0).abs() < 1e-14);
            let b2 = beta_coefficient(d, 2);
            assert!((b2 / 0.375_f64.powf(d + 1.0) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn beta_at_d1_is_gauss_coefficient() {
        let mut coeff = 1.0_f64;
        let mut logs = LogHalfRatios::new();
        for m in 0..=10_000u64 {
            let (log_ratio, _) = logs.next().unwrap();
            let beta = (2.0 * log_ratio).exp();
            assert!((beta / (coeff * coeff) - 1.0).abs() < 1e-12, "m = {m}");
            coeff *= (m as f64 + 0.5) / (m as f64 + 1.0);
        }
        assert!((beta_coefficient(1.0, 500) / (log_half_ratio(500) * 2.0).exp() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn continuous_i_reproduces_i2_at_one() {
        let e = continuous_i(2.0, 1.0, &TruncationControl::tolerance(1e-10)).unwrap();
        assert_eq!((e.value * 1e4).round() / 1e4, 1.3932);
        assert!((e.value - I2_AT_ONE).abs() < 1e-9, "{}", e.value);
    }

    #[test]
    fn continuous_i_large_eta_and_d1() {
        for d in [1.0, 2.5, 4.0] {
            let e = continuous_i(d, 1e6, &tol()).unwrap();
            assert!((e.value - 1.0).abs() < 1e-11);
        }
        let e = continuous_i(1.0, 2.0, &TruncationControl::tolerance(1e-15)).unwrap();
        assert!((e.value - two_over_pi_k(0.5)).abs() < 1e-14);
    }

    #[test]
    fn continuous_i_domain() {
        assert!(matches!(continuous_i(1.0, 1.0, &tol()), Err(Error::DivergentSeries)));
        assert!(matches!(continuous_i(0.5, 1.0, &tol()), Err(Error::DivergentSeries)));
        assert!(matches!(continuous_i(2.0, 0.9, &tol()), Err(Error::Domain(_))));
        assert!(matches!(continuous_i(-0.5, 2.0, &tol()), Err(Error::Domain(_))));
        // d = 0 is the binomial series (1 − w)^{-1/2}.
        let e = continuous_i(0.0, 2.0, &TruncationControl::tolerance(1e-15)).unwrap();
        assert!((e.value - (1.0_f64 - 0.25).powf(-0.5)).abs() < 1e-14);
    }

    #[test]
    fn fixed_truncation_last_term_near_the_singular_point() {
        let e = continuous_i(1.01, 1.0, &TruncationControl::fixed(DEFAULT_FIXED_TERMS)).unwrap();
        assert_eq!(e.terms_used, DEFAULT_FIXED_TERMS + 1);
        assert!((e.last_term / 3.02e-5 - 1.0).abs() < 0.01, "{}", e.last_term);
        assert!(e.tail_bound > e.last_term);
        let e = continuous_i(1.01, 1.005, &TruncationControl::fixed(DEFAULT_FIXED_TERMS)).unwrap();
        assert!((e.last_term / 1.42e-48 - 1.0).abs() < 0.02, "{}", e.last_term);
    }

    #[test]
    fn derivative_series_limits_and_sign() {
        let e = continuous_i_dd(2.0, 1e6, &tol()).unwrap();
        assert!(e.value.abs() < 1e-12);
        let e = continuous_i_dd(2.0, 1.0, &TruncationControl::tolerance(1e-6)).unwrap();
        assert!(e.value < 0.0);
    }

    #[test]
    fn derivative_series_matches_central_difference() {
        let h = 1e-5;
        let c = TruncationControl::tolerance(1e-15);
        let fd = (continuous_i(3.0 + h, 2.0, &c).unwrap().value - continuous_i(3.0 - h, 2.0, &c).unwrap().value)
            / (2.0 * h);
        let dd = continuous_i_dd(3.0, 2.0, &c).unwrap().value;
        assert!((dd - fd).abs() < 1e-6, "{dd} vs {fd}");
    }

    #[test]
    fn derivative_series_at_unit_argument_matches_central_difference() {
        let h = 1e-3;
        let c = TruncationControl::tolerance(1e-11);
        let fd = (continuous_i(3.0 + h, 1.0, &c).unwrap().value - continuous_i(3.0 - h, 1.0, &c).unwrap().value)
            / (2.0 * h);
        let dd = continuous_i_dd(3.0, 1.0, &c).unwrap().value;
        assert!((dd - fd).abs() < 1e-6, "{dd} vs {fd}");
    }

    #[test]
    fn monotone_in_dimension_and_anisotropy() {
        let ds = [1.5, 2.0, 3.0, 5.0];
        let etas = [1.0, 1.005, 1.1, 2.0];
        let c = TruncationControl::tolerance(1e-6);
        let grid: Vec<Vec<f64>> =
            ds.iter().map(|&d| etas.iter().map(|&eta| continuous_i(d, eta, &c).unwrap().value).collect()).collect();
        for (i, row) in grid.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!(v >= 1.0);
                if i + 1 < ds.len() {
                    assert!(grid[i + 1][j] < v, "not decreasing in d at {}, {}", ds[i], etas[j]);
                }
                if j + 1 < etas.len() {
                    assert!(row[j + 1] < v, "not decreasing in eta at {}, {}", ds[i], etas[j]);
                }
            }
        }
    }

    #[test]
    fn integer_dimension_agrees_with_hypergeometric_form() {
        for k in 2..=5u32 {
            for eta in [1.005, 2.0] {
                let cont = continuous_i(k as f64, eta, &tol()).unwrap().value;
                let ghgf = ghgf_eval_with(&HypergeometricSpec::watson_i(k, eta).unwrap(), &tol()).unwrap().value;
                assert!(((cont - ghgf) / ghgf).abs() < 1e-12, "k={k} eta={eta}");
            }
        }
    }

    #[test]
    fn divergent_point_partial_sums_grow_without_bound() {
        // β(1, m) ~ 1/(πm): each decade adds about ln(10)/π.
        let mut logs = LogHalfRatios::new();
        let mut acc = NeumaierSum::new();
        let mut checkpoints = Vec::new();
        for m in 0..=1_000_000u64 {
            let (l, _) = logs.next().unwrap();
            acc.add((2.0 * l).exp());
            if [10_000, 100_000, 1_000_000].contains(&m) {
                checkpoints.push(acc.value());
            }
        }
        let decade = std::f64::consts::LN_10 / std::f64::consts::PI;
        assert!(checkpoints.windows(2).all(|w| w[1] > w[0]));
        for w in checkpoints.windows(2) {
            assert!(((w[1] - w[0]) / decade - 1.0).abs() < 1e-3);
        }
    }

    proptest! {
        #[test]
        fn recurrence_matches_pochhammer_products(
            a in prop::collection::vec(-2.5f64..4.0, 1..4),
            b in prop::collection::vec(0.1f64..4.0, 0..3),
            w in 0.0f64..1.0,
        ) {
            let s = HypergeometricSpec::new(a, b, w).unwrap();
            let mut term = 1.0;
            for m in 0..=50u64 {
                let direct = s.term(m);
                if direct != 0.0 {
                    prop_assert!(((term - direct) / direct).abs() < 1e-13, "m = {}", m);
                }
                term *= s.term_ratio(m);
            }
        }
    }
}
