//! Watson-like lattice integrals for hyper-bcc antiferromagnets.
//!
//! The integrals
//!
//! ```text
//! I_d(η) = π^{-d} ∫_{[0,π]^d} η / √(η² − Π cos²(x_j/2)) dx
//! J_d(η) = π^{-d} ∫_{[0,π]^d} η / (η² − Π cos²(x_j/2)) dx
//! ```
//!
//! and their relatives are evaluated exactly as generalized hypergeometric series
//! ([`hyperseries`], [`lattice`]), checked against brute-force quadrature ([`oracle`])
//! and against their differential equations ([`odecheck`]), and fed into the RPA
//! observables of the Heisenberg antiferromagnet ([`physics`]). The dimension `d` may
//! be continued to real values through the coefficient family `β(d, m)`.
//!
//! The `watson` binary in this crate is a thin front end over [`cli`]; the runnable
//! programs under `examples/` walk through each capability.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hyperseries;
pub mod lattice;
pub mod odecheck;
pub mod oracle;
pub mod physics;
pub mod quadrature;
pub mod special;
pub mod summation;

pub use error::{Error, Result};
pub use hyperseries::{
    beta_coefficient, classify_continuous, classify_convergence, continuous_i, continuous_i_dd, ghgf_eval,
    ghgf_eval_with, pochhammer, ConvergenceClass, HypergeometricSpec, SeriesEvaluation, TruncationControl,
};
