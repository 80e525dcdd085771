//! RPA observables of the Heisenberg antiferromagnet on the hyper-bcc lattice.
//!
//! With `P = ½[I(d,η) − 1]` the ground-state sublattice magnetization is
//!
//! ```text
//! ⟨S⟩ = [(S − P)(1 + P)^{2S+1} + (S + 1 + P) P^{2S+1}] / [(1 + P)^{2S+1} − P^{2S+1}]
//! ```
//!
//! and the Néel temperature is `k_B T_N = S(S+1)/3 · 2^d J / J(d,η)`, which also equals
//! the Curie temperature of the ferromagnet on the same lattice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperseries::{check_eta, continuous_i, TruncationControl};
use crate::lattice::{continuous_j, g_bcc_ferro};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinSystem {
    spin: f64,
    exchange: f64,
    dimension: f64,
    anisotropy: f64,
}

impl SpinSystem {
    pub fn new(spin: f64, exchange: f64, dimension: f64, anisotropy: f64) -> Result<Self> {
        check_spin(spin)?;
        if !(exchange > 0.0) || !exchange.is_finite() {
            return Err(Error::domain(format!("exchange {exchange} must be positive")));
        }
        if !dimension.is_finite() || dimension < 1.0 {
            return Err(Error::domain(format!("dimension {dimension} must be >= 1")));
        }
        check_eta(anisotropy)?;
        Ok(Self { spin, exchange, dimension, anisotropy })
    }

    pub fn spin(&self) -> f64 {
        self.spin
    }

    pub fn exchange(&self) -> f64 {
        self.exchange
    }

    pub fn dimension(&self) -> f64 {
        self.dimension
    }

    pub fn anisotropy(&self) -> f64 {
        self.anisotropy
    }

    /// `z(d) = 2^d` nearest neighbours.
    pub fn coordination(&self) -> f64 {
        self.dimension.exp2()
    }
}

fn check_spin(spin: f64) -> Result<()> {
    let twice = 2.0 * spin;
    if !(twice >= 1.0) || twice.fract() != 0.0 || !twice.is_finite() {
        return Err(Error::domain(format!("spin {spin} must be a positive half-integer")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationResult {
    pub p_s: f64,
    pub magnetization: f64,
    pub relative: f64,
}

/// Critical temperature, with the vanishing case kept distinct from a failure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CriticalTemperature {
    Finite(f64),
    /// `J(d, η)` diverges: no order at any finite temperature.
    Zero,
}

impl CriticalTemperature {
    pub fn value(self) -> f64 {
        match self {
            CriticalTemperature::Finite(t) => t,
            CriticalTemperature::Zero => 0.0,
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, CriticalTemperature::Zero)
    }
}

/// `P = ½[I(d, η) − 1]`.
pub fn fluctuation_p(system: &SpinSystem, control: &TruncationControl) -> Result<f64> {
    let i = continuous_i(system.dimension, system.anisotropy, control)?;
    Ok((0.5 * (i.value - 1.0)).max(0.0))
}

/// Ground-state magnetization for spin `S` and fluctuation integral `P`.
///
/// Dividing through by `(1+P)^n`, `n = 2S+1`, and writing `a_k = 1 − (P/(1+P))^k`,
/// the expression becomes `½ Σ_{k=1}^{2S} a_k a_{n−k} / a_n`, a ratio of positive terms
/// that stays accurate for any `P`.
pub fn magnetization(spin: f64, p: f64) -> Result<f64> {
    check_spin(spin)?;
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::domain(format!("fluctuation integral {p} must be finite and >= 0")));
    }
    let n = (2.0 * spin).round() as i32 + 1;
    let ln_r = (-1.0 / (1.0 + p)).ln_1p();
    let a = |k: i32| -(k as f64 * ln_r).exp_m1();
    let numerator: f64 = (1..n).map(|k| a(k) * a(n - k)).sum();
    Ok(0.5 * numerator / a(n))
}

pub fn ground_state(system: &SpinSystem, control: &TruncationControl) -> Result<MagnetizationResult> {
    let p_s = fluctuation_p(system, control)?;
    let m = magnetization(system.spin, p_s)?;
    Ok(MagnetizationResult { p_s, magnetization: m, relative: m / system.spin })
}

/// `2^d / J(d, η)`, the critical temperature in units of `S(S+1)J/3`.
pub fn reduced_critical_temperature(dimension: f64, eta: f64, control: &TruncationControl) -> Result<CriticalTemperature> {
    match continuous_j(dimension, eta, control) {
        Ok(j) => Ok(CriticalTemperature::Finite(dimension.exp2() / j.value)),
        Err(Error::DivergentSeries) => Ok(CriticalTemperature::Zero),
        Err(e) => Err(e),
    }
}

fn scale_temperature(system: &SpinSystem, reduced: CriticalTemperature) -> CriticalTemperature {
    let s = system.spin;
    match reduced {
        CriticalTemperature::Finite(t) => CriticalTemperature::Finite(s * (s + 1.0) / 3.0 * system.exchange * t),
        CriticalTemperature::Zero => CriticalTemperature::Zero,
    }
}

/// `k_B T_N` with `k_B = 1`, in the energy units of the exchange.
pub fn neel_temperature(system: &SpinSystem, control: &TruncationControl) -> Result<CriticalTemperature> {
    let reduced = reduced_critical_temperature(system.dimension, system.anisotropy, control)?;
    Ok(scale_temperature(system, reduced))
}

/// `k_B T_C` of the ferromagnet, through the ferromagnetic Green function.
pub fn curie_temperature(system: &SpinSystem, control: &TruncationControl) -> Result<CriticalTemperature> {
    let d = system.dimension;
    if d.fract() != 0.0 {
        return Err(Error::domain(format!("Curie temperature needs an integer dimension, got {d}")));
    }
    let reduced = match g_bcc_ferro(d as u32, system.anisotropy, control) {
        Ok(g) => CriticalTemperature::Finite(d.exp2() / g.value),
        Err(Error::DivergentSeries) => CriticalTemperature::Zero,
        Err(e) => return Err(e),
    };
    Ok(scale_temperature(system, reduced))
}
