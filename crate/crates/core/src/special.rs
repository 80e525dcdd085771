//! Complete elliptic integrals, the modified Bessel function `I₀`, Stirling numbers of
//! the second kind and binomial coefficients.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 40;
const AGM_EPS: f64 = 1e-16;

/// Crossover between the power series and the large-argument expansion of `I₀`.
const BESSEL_SERIES_LIMIT: f64 = 15.0;

pub const DEFAULT_STIRLING_MAX_D: u32 = 20;

/// Elliptic modulus `k` (not the parameter `m = k²`), `0 ≤ k ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::ModulusOutOfRange(k));
        }
        Ok(Self(k))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Complementary modulus `√(1 − k²)`, formed without cancellation near `k = 1`.
    pub fn complementary(self) -> f64 {
        ((1.0 - self.0) * (1.0 + self.0)).sqrt()
    }
}

/// `K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ)` via the arithmetic-geometric mean.
pub fn elliptic_k(k: EllipticModulus) -> Result<f64> {
    if k.value() >= 1.0 {
        return Err(Error::ModulusOutOfRange(k.value()));
    }
    let (a, _) = agm(1.0, k.complementary());
    Ok(PI / (2.0 * a))
}

/// `E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ` via the AGM with the `Σ 2^{n-1} c_n²` correction.
pub fn elliptic_e(k: EllipticModulus) -> Result<f64> {
    let kv = k.value();
    if kv == 1.0 {
        return Ok(1.0);
    }
    let mut a = 1.0;
    let mut b = k.complementary();
    let mut c = kv;
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..AGM_MAX_ITER {
        if c.abs() <= AGM_EPS * a {
            break;
        }
        let a_next = 0.5 * (a + b);
        let b_next = (a * b).sqrt();
        c = 0.5 * (a - b);
        weight *= 2.0;
        sum += weight * c * c;
        a = a_next;
        b = b_next;
    }
    Ok(PI / (2.0 * a) * (1.0 - sum))
}

fn agm(mut a: f64, mut b: f64) -> (f64, usize) {
    for iter in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_EPS * a {
            return (a, iter);
        }
        let a_next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = a_next;
    }
    (a, AGM_MAX_ITER)
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= BESSEL_SERIES_LIMIT {
        i0_series(ax)
    } else {
        ax.exp() * i0_asymptotic_scaled(ax)
    }
}

/// `e^{-|x|} I₀(x)`, finite for all finite `x`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= BESSEL_SERIES_LIMIT {
        i0_series(ax) * (-ax).exp()
    } else {
        i0_asymptotic_scaled(ax)
    }
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0.0;
    loop {
        m += 1.0;
        term *= q / (m * m);
        sum += term;
        if term <= f64::EPSILON * 0.25 * sum {
            return sum;
        }
    }
}

/// `Σ_k ((2k−1)!!)² / (k! (8x)^k) / √(2πx)`, summed up to its smallest term.
fn i0_asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0_f64;
    loop {
        let ratio = (2.0 * k + 1.0).powi(2) / (8.0 * (k + 1.0) * x);
        if ratio >= 1.0 {
            break;
        }
        term *= ratio;
        sum += term;
        k += 1.0;
        if term <= f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// Exact triangular table of `S(d, α)` for `0 ≤ α ≤ d ≤ max_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<u128>>,
}

impl StirlingTable {
    pub fn new(max_d: u32) -> Self {
        let mut rows: Vec<Vec<u128>> = vec![vec![1]];
        for d in 1..=max_d as usize {
            let prev = &rows[d - 1];
            let mut row = vec![0u128; d + 1];
            for alpha in 1..=d {
                let stay = if alpha < d { alpha as u128 * prev[alpha] } else { 0 };
                row[alpha] = stay + prev[alpha - 1];
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn max_d(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    pub fn get(&self, d: u32, alpha: u32) -> Result<u128> {
        if alpha > d || d > self.max_d() {
            return Err(Error::IndexOutOfRange { d: d as i64, alpha: alpha as i64 });
        }
        Ok(self.rows[d as usize][alpha as usize])
    }

    pub fn row(&self, d: u32) -> Option<&[u128]> {
        self.rows.get(d as usize).map(Vec::as_slice)
    }
}

impl Default for StirlingTable {
    fn default() -> Self {
        Self::new(DEFAULT_STIRLING_MAX_D)
    }
}

/// Stirling number of the second kind `S(d, α)`.
pub fn stirling2(d: u32, alpha: i64) -> Result<u128> {
    if alpha < 0 || alpha > d as i64 {
        return Err(Error::IndexOutOfRange { d: d as i64, alpha });
    }
    StirlingTable::new(d).get(d, alpha as u32)
}

/// Binomial coefficient `C(n, k)`, zero for `k > n`.
pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}
