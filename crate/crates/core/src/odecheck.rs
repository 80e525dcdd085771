//! Differential-equation checks.
//!
//! The hypergeometric equation for `I_d` is verified exactly on coefficients: with
//! `w = η⁻²`, `θ = η∂_η` acts on `w^m` as multiplication by `−2m`. The equations for
//! `J_d`, which mix powers of `η`, are assembled as ordinary differential operators and
//! applied to finite-difference derivatives.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hyperseries::TruncationControl;
use crate::lattice::j_bcc;
use crate::special::{binomial, StirlingTable};

/// Truncated series `Σ_{m<M} c_m w^m` in `w = 1/η²`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coefficients: Vec<f64>,
    /// Number of leading coefficients that agree with the untruncated series.
    valid_terms: usize,
}

impl PowerSeries {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("power series coefficients must be finite"));
        }
        let valid_terms = coefficients.len();
        Ok(Self { coefficients, valid_terms })
    }

    /// Coefficients `[(½)_m/m!]^{d+1}` of `I_d`, by the product recurrence.
    pub fn watson_i(d: u32, terms: usize) -> Self {
        let mut coefficients = Vec::with_capacity(terms);
        let mut c = 1.0_f64;
        for m in 0..terms {
            coefficients.push(c);
            c *= ((m as f64 + 0.5) / (m as f64 + 1.0)).powi(d as i32 + 1);
        }
        Self { coefficients, valid_terms: terms }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn valid_terms(&self) -> usize {
        self.valid_terms
    }

    /// `(θ − shift)^times`, applied coefficient-wise as `(−2m − shift)^times`.
    pub fn theta_shifted(&self, shift: f64, times: u32) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(m, c)| c * (-2.0 * m as f64 - shift).powi(times as i32))
            .collect();
        Self { coefficients, valid_terms: self.valid_terms }
    }

    /// Multiplication by `w`, keeping the length.
    pub fn times_w(&self) -> Self {
        let mut coefficients = Vec::with_capacity(self.len());
        if !self.is_empty() {
            coefficients.push(0.0);
            coefficients.extend_from_slice(&self.coefficients[..self.len() - 1]);
        }
        Self { coefficients, valid_terms: (self.valid_terms + 1).min(self.len()) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "series lengths differ");
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a - b).collect();
        Self { coefficients, valid_terms: self.valid_terms.min(other.valid_terms) }
    }
}

/// `θ^times` applied to a series in `w`.
pub fn theta_apply(series: &PowerSeries, times: u32) -> PowerSeries {
    series.theta_shifted(0.0, times)
}

/// `[θ^{d+1} − w (θ − 1)^{d+1}] f` on coefficients.
pub fn watson_operator(series: &PowerSeries, d: u32) -> PowerSeries {
    let lead = theta_apply(series, d + 1);
    let shifted = series.theta_shifted(1.0, d + 1).times_w();
    lead.sub(&shifted)
}

/// Coefficient residual of the `I_d` equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientResidual {
    /// `max_m |r_m|`.
    pub max_abs: f64,
    /// `max_m |(2m)^{d+1} c_m|`, the size of the two terms that cancel in `r_m`.
    pub scale: f64,
    /// `max_m |c_m · 2m|`.
    pub first_order_scale: f64,
}

impl CoefficientResidual {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.max_abs / self.scale
        }
    }
}

/// Residual of the `I_d` equation on its first `terms` coefficients.
pub fn ode_residual_i(d: u32, terms: usize) -> Result<CoefficientResidual> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    Ok(coefficient_residual(&PowerSeries::watson_i(d, terms), d))
}

/// Same check for an arbitrary coefficient series.
pub fn coefficient_residual(series: &PowerSeries, d: u32) -> CoefficientResidual {
    let residual = watson_operator(series, d);
    let valid = residual.valid_terms();
    let max_abs = residual.coefficients()[..valid].iter().fold(0.0_f64, |acc, r| acc.max(r.abs()));
    let lead = theta_apply(series, d + 1);
    let scale = lead.coefficients()[..valid].iter().fold(0.0_f64, |acc, r| acc.max(r.abs()));
    let first_order_scale = theta_apply(series, 1).coefficients().iter().fold(0.0_f64, |acc, r| acc.max(r.abs()));
    CoefficientResidual { max_abs, scale, first_order_scale }
}

/// One term `coefficient · η^power · ∂_η^order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorTerm {
    pub order: u32,
    pub power: i32,
    pub coefficient: i128,
}

/// Linear differential operator with Laurent-polynomial coefficients in `η`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOperator {
    terms: Vec<OperatorTerm>,
}

impl LinearOperator {
    fn from_map(map: BTreeMap<(u32, i32), i128>) -> Self {
        let mut terms: Vec<OperatorTerm> = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|((order, power), coefficient)| OperatorTerm { order, power, coefficient })
            .collect();
        terms.sort_by(|a, b| b.order.cmp(&a.order).then(b.power.cmp(&a.power)));
        Self { terms }
    }

    /// The equation for `J_d`, expanded from Stirling and binomial coefficients:
    ///
    /// ```text
    /// η θ^d + Σ_α S(d,α) α η^α ∂^{α−1} − η⁻¹ (θ − 1)^d
    ///       − η⁻² Σ_k Σ_{α≥1} C(d,k) (−1)^{d−k} S(k,α) α η^α ∂^{α−1}
    /// ```
    ///
    /// with `θ^k = Σ_α S(k,α) η^α ∂^α`.
    pub fn j_equation(d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        let stirling = StirlingTable::new(d);
        let s = |k: u32, a: u32| stirling.get(k, a).map(|v| v as i128);
        let mut map: BTreeMap<(u32, i32), i128> = BTreeMap::new();
        let mut add = |order: u32, power: i32, c: i128| *map.entry((order, power)).or_insert(0) += c;
        for alpha in 0..=d {
            let sda = s(d, alpha)?;
            add(alpha, alpha as i32 + 1, sda);
            if alpha >= 1 {
                add(alpha - 1, alpha as i32, sda * alpha as i128);
            }
        }
        for k in 0..=d {
            let sign: i128 = if (d - k).is_multiple_of(2) { 1 } else { -1 };
            let ck = binomial(d, k) as i128 * sign;
            for alpha in 0..=k {
                let ska = s(k, alpha)?;
                add(alpha, alpha as i32 - 1, -ck * ska);
                if alpha >= 1 {
                    add(alpha - 1, alpha as i32 - 2, -ck * ska * alpha as i128);
                }
            }
        }
        Ok(Self::from_map(map))
    }

    /// `η²(η²−1)∂³ + 3η(2η²−1)∂² + (7η²−1)∂ + η`.
    pub fn cubic_green() -> Self {
        let map = BTreeMap::from([
            ((3, 4), 1),
            ((3, 2), -1),
            ((2, 3), 6),
            ((2, 1), -3),
            ((1, 2), 7),
            ((1, 0), -1),
            ((0, 1), 1),
        ]);
        Self::from_map(map)
    }

    pub fn terms(&self) -> &[OperatorTerm] {
        &self.terms
    }

    pub fn max_order(&self) -> u32 {
        self.terms.iter().map(|t| t.order).max().unwrap_or(0)
    }

    /// Coefficient of `∂^order` at `η`.
    pub fn polynomial_at(&self, order: u32, eta: f64) -> f64 {
        self.terms.iter().filter(|t| t.order == order).map(|t| t.coefficient as f64 * eta.powi(t.power)).sum()
    }

    /// `Σ p_k(η) f^{(k)}(η)` given `derivatives[k] = f^{(k)}(η)`.
    pub fn apply(&self, eta: f64, derivatives: &[f64]) -> f64 {
        (0..=self.max_order()).map(|k| self.polynomial_at(k, eta) * derivatives[k as usize]).sum()
    }
}

/// Fornberg weights for the `order`-th derivative at 0 from samples at `offsets`.
pub fn fd_weights(offsets: &[f64], order: usize) -> Vec<f64> {
    let n = offsets.len();
    assert!(order < n, "need more points than the derivative order");
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Half-width of the fourth-order central stencil for the `order`-th derivative:
/// 5 points up to order 2, 7 for orders 3–4, 9 for 5–6.
pub fn stencil_half_width(order: usize) -> usize {
    order.div_ceil(2) + 1
}

/// Derivatives `f^{(k)}(x)` for `k = 0..=max_order`, with an estimate of the rounding
/// noise in each one.
pub fn central_derivatives<F: Fn(f64) -> Result<f64>>(f: F, x: f64, h: f64, max_order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let reach = stencil_half_width(max_order.max(1)) as i64;
    let samples: BTreeMap<i64, f64> =
        (-reach..=reach).map(|i| f(x + i as f64 * h).map(|v| (i, v))).collect::<Result<_>>()?;
    let f0 = samples[&0];
    let mut derivatives = vec![f0];
    let mut noise = vec![f64::EPSILON * f0.abs()];
    for order in 1..=max_order {
        let half = stencil_half_width(order) as i64;
        let offsets: Vec<f64> = (-half..=half).map(|i| i as f64).collect();
        let weights = fd_weights(&offsets, order);
        let scale = h.powi(order as i32);
        let value: f64 = (-half..=half).zip(&weights).map(|(i, w)| w * samples[&i]).sum::<f64>() / scale;
        let magnitude: f64 = (-half..=half).zip(&weights).map(|(i, w)| (w * samples[&i]).abs()).sum::<f64>();
        derivatives.push(value);
        noise.push(4.0 * f64::EPSILON * magnitude / scale);
    }
    Ok((derivatives, noise))
}

/// Result of applying a differential operator to finite-difference derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifferenceResidual {
    pub residual: f64,
    /// Propagated rounding noise of the stencils.
    pub noise: f64,
    /// `Σ_k |p_k(η) f^{(k)}(η)|`, the size of the terms that cancel.
    pub scale: f64,
}

fn check_stencil_domain(eta: f64, h: f64, reach: usize) -> Result<()> {
    if !(eta > 1.05) || !eta.is_finite() {
        return Err(Error::domain(format!("eta = {eta} must exceed 1.05")));
    }
    if !(h > 0.0) || eta - reach as f64 * h <= 1.0 {
        return Err(Error::domain(format!("step {h} puts the stencil outside eta > 1")));
    }
    Ok(())
}

fn j_value(d: u32) -> impl Fn(f64) -> Result<f64> {
    move |eta| Ok(j_bcc(d, eta, &TruncationControl::tolerance(1e-15))?.value)
}

fn operator_residual(op: &LinearOperator, d: u32, eta: f64, h: f64) -> Result<FiniteDifferenceResidual> {
    let max_order = op.max_order() as usize;
    check_stencil_domain(eta, h, stencil_half_width(max_order.max(1)))?;
    let (derivatives, noise) = central_derivatives(j_value(d), eta, h, max_order)?;
    let residual = op.apply(eta, &derivatives);
    let mut total_noise = 0.0;
    let mut scale = 0.0;
    for k in 0..=max_order {
        let p = op.polynomial_at(k as u32, eta).abs();
        total_noise += p * noise[k];
        scale += p * derivatives[k].abs();
    }
    Ok(FiniteDifferenceResidual { residual: residual.abs(), noise: total_noise, scale })
}

/// `|η²(η²−1)J₃‴ + 3η(2η²−1)J₃″ + (7η²−1)J₃′ + ηJ₃|` from central differences of `J₃`.
pub fn ode_residual_j3(eta: f64, h: f64) -> Result<FiniteDifferenceResidual> {
    operator_residual(&LinearOperator::cubic_green(), 3, eta, h)
}

/// Residual of the assembled `J_d` equation, `2 ≤ d ≤ 6`.
pub fn ode_residual_j_general(d: u32, eta: f64, h: f64) -> Result<FiniteDifferenceResidual> {
    if !(2..=6).contains(&d) {
        return Err(Error::domain(format!("general J equation is checked for 2 <= d <= 6, got {d}")));
    }
    let r = operator_residual(&LinearOperator::j_equation(d)?, d, eta, h)?;
    if r.noise > 0.1 * r.scale {
        return Err(Error::StencilUnstable { noise: r.noise, scale: r.scale });
    }
    Ok(r)
}
