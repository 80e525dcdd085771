//! Brute-force evaluation of the defining integrals.
//!
//! Nothing here touches the series engine: values come from integrating
//! [`LatticeFamily::integrand`] over the cube `[0, π]^d`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeFamily, LatticeQuery};
use crate::quadrature::{integrate_nested, AdaptiveRule};
use crate::summation::NeumaierSum;

/// Monte Carlo work is split into this many independent streams, whatever the thread count.
pub const MC_SHARDS: u64 = 64;

/// Smallest sample count for which a Monte Carlo result is reported.
pub const MIN_MC_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Target absolute error of the cube average.
    pub abs_tolerance: f64,
    pub max_subdivisions: usize,
    pub mc_samples: u64,
    pub rng_seed: u64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tolerance: 1e-9, max_subdivisions: 2000, mc_samples: 10_000_000, rng_seed: 42 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    NestedAdaptive,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub error_estimate: f64,
    pub method: OracleMethod,
    pub samples_or_evals: u64,
    pub seed: Option<u64>,
}

fn check_config(config: &QuadratureConfig) -> Result<()> {
    if !(config.abs_tolerance > 0.0) {
        return Err(Error::domain("abs_tolerance must be positive"));
    }
    if config.max_subdivisions == 0 {
        return Err(Error::domain("max_subdivisions must be positive"));
    }
    Ok(())
}

fn oracle_dimension(query: &LatticeQuery) -> Result<usize> {
    let d = query
        .integer_dimension()
        .ok_or_else(|| Error::domain("no defining integral exists for non-integer dimension"))?;
    if query.anisotropy == 1.0 {
        return Err(Error::SingularInput);
    }
    Ok(d as usize)
}

/// Nested adaptive Gauss–Kronrod integration of the defining integral, `d ≤ 3`.
pub fn integrate_direct(query: &LatticeQuery, config: &QuadratureConfig) -> Result<OracleResult> {
    check_config(config)?;
    let d = oracle_dimension(query)?;
    if d > 3 {
        return Err(Error::domain(format!("nested quadrature is limited to d <= 3, got {d}")));
    }
    let volume = PI.powi(d as i32);
    let rule = AdaptiveRule::new(config.abs_tolerance * volume, config.max_subdivisions);
    let family = query.family;
    let eta = query.anisotropy;
    let r = integrate_nested(|x| family.integrand(eta, x), &vec![0.0; d], &vec![PI; d], &rule)?;
    Ok(OracleResult {
        value: r.value / volume,
        error_estimate: r.error / volume,
        method: OracleMethod::NestedAdaptive,
        samples_or_evals: r.evaluations,
        seed: None,
    })
}

/// Plain Monte Carlo average over `[0, π]^d`.
///
/// Samples are split over [`MC_SHARDS`] ChaCha streams of one seed and the shard sums
/// are combined in shard order, so the result does not depend on the thread pool.
pub fn integrate_mc(query: &LatticeQuery, config: &QuadratureConfig) -> Result<OracleResult> {
    let d = oracle_dimension(query)?;
    if d < 2 {
        return Err(Error::domain("Monte Carlo oracle is for d >= 2"));
    }
    let n = config.mc_samples;
    if n < MIN_MC_SAMPLES {
        return Err(Error::domain(format!("need at least {MIN_MC_SAMPLES} samples, got {n}")));
    }
    let family = query.family;
    let eta = query.anisotropy;
    let seed = config.rng_seed;
    let shards: Vec<(f64, f64)> = (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let count = n / MC_SHARDS + u64::from(shard < n % MC_SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut point = vec![0.0; d];
            let (mut sum, mut sum_sq) = (NeumaierSum::new(), NeumaierSum::new());
            for _ in 0..count {
                for x in point.iter_mut() {
                    *x = PI * rng.random::<f64>();
                }
                let f = family.integrand(eta, &point);
                sum.add(f);
                sum_sq.add(f * f);
            }
            (sum.value(), sum_sq.value())
        })
        .collect();
    let sum: NeumaierSum = shards.iter().map(|s| s.0).collect();
    let sum_sq: NeumaierSum = shards.iter().map(|s| s.1).collect();
    let nf = n as f64;
    let mean = sum.value() / nf;
    let variance = ((sum_sq.value() / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    Ok(OracleResult {
        value: mean,
        error_estimate: (variance / nf).sqrt(),
        method: OracleMethod::MonteCarlo,
        samples_or_evals: n,
        seed: Some(seed),
    })
}

/// `I₂(1)` by quadrature despite the `1/r` singularity at the origin.
///
/// With `x = πu²`, `y = πv²` and `1 − cos²(x/2)cos²(y/2) = sin²(x/2) + cos²(x/2) sin²(y/2)`
/// the integral becomes `4 ∫∫_{[0,1]²} uv / √(…) du dv` with a bounded integrand.
pub fn integrate_singular_i2(config: &QuadratureConfig) -> Result<OracleResult> {
    check_config(config)?;
    let rule = AdaptiveRule::new(config.abs_tolerance / 4.0, config.max_subdivisions);
    let integrand = |p: &[f64]| {
        let (u, v) = (p[0], p[1]);
        if u == 0.0 || v == 0.0 {
            return 0.0;
        }
        let (sx, cx) = (0.5 * PI * u * u).sin_cos();
        let sy = (0.5 * PI * v * v).sin();
        u * v / (sx * sx + cx * cx * sy * sy).sqrt()
    };
    let r = integrate_nested(integrand, &[0.0, 0.0], &[1.0, 1.0], &rule)?;
    Ok(OracleResult {
        value: 4.0 * r.value,
        error_estimate: 4.0 * r.error,
        method: OracleMethod::NestedAdaptive,
        samples_or_evals: r.evaluations,
        seed: None,
    })
}

/// Oracle for any family with a defining integral: nested quadrature up to `d = 3`,
/// Monte Carlo above.
pub fn integrate(query: &LatticeQuery, config: &QuadratureConfig) -> Result<OracleResult> {
    match query.integer_dimension() {
        Some(d) if d <= 3 => integrate_direct(query, config),
        _ => integrate_mc(query, config),
    }
}

/// Whether the family's defining integral is available to the oracle at this `d`.
pub fn has_defining_integral(family: LatticeFamily, d: u32) -> bool {
    family.fixed_dimension().is_none_or(|fixed| fixed == d)
}
