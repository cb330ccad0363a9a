//! Scalar and operator entropies.
//!
//! All values are in nats. [`LogBase`] is the single conversion point for
//! presenting results in bits.
//!
//! The Shannon and von Neumann entropies are provided in their homogeneous
//! extensions to unnormalized inputs, `S(w) = Σ η(w_i) − η(Σ w_i)`, which
//! coincide with the ordinary entropies on probability vectors and states.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::HermitianMatrix;
use crate::state::{DensityMatrix, PSD_TOL};

/// Eigenvalues of the second argument of [`relative_entropy`] below this are
/// treated as exact zeros.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Slack allowed on scalar domain checks before an input is rejected.
const DOMAIN_SLACK: f64 = 1e-12;

/// Logarithm base used when presenting entropic quantities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    E,
    Two,
}

impl LogBase {
    /// Converts a value in nats to this base.
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            LogBase::E => nats,
            LogBase::Two => nats / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::E => "nats",
            LogBase::Two => "bits",
        }
    }
}

/// A nonnegative real or `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinite => None,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedReal::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.partial_cmp(b),
            (Finite(_), Infinite) => Some(Ordering::Less),
            (Infinite, Finite(_)) => Some(Ordering::Greater),
            (Infinite, Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinite => write!(f, "+inf"),
        }
    }
}

fn check_nonneg(x: f64, what: &str) -> Result<f64> {
    if x.is_nan() || x < -DOMAIN_SLACK {
        return Err(invalid(format!("{what} requires a nonnegative argument, got {x}")));
    }
    Ok(x.max(0.0))
}

#[inline]
pub(crate) fn eta_raw(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

#[inline]
pub(crate) fn h2_raw(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    eta_raw(p) + eta_raw(1.0 - p)
}

/// `(1+ε)log(1+ε) − ε log ε`
#[inline]
pub(crate) fn g_raw(eps: f64) -> f64 {
    let eps = eps.max(0.0);
    // ln_1p keeps precision for small ε
    (1.0 + eps) * eps.ln_1p() + eta_raw(eps)
}

pub(crate) fn shannon_raw(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    weights.iter().map(|w| eta_raw(*w)).sum::<f64>() - eta_raw(total)
}

/// `η(x) = −x log x` with `η(0) = 0`.
pub fn eta(x: f64) -> Result<f64> {
    Ok(eta_raw(check_nonneg(x, "eta")?))
}

/// Homogeneous Shannon entropy `Σ η(w_i) − η(Σ w_i)`.
pub fn shannon_entropy_ext(weights: &[f64]) -> Result<f64> {
    for w in weights {
        check_nonneg(*w, "shannon entropy")?;
    }
    Ok(shannon_raw(weights))
}

/// Homogeneous von Neumann entropy `Tr η(A) − η(Tr A)` of a PSD operator.
pub fn von_neumann_entropy_ext(a: &HermitianMatrix) -> Result<f64> {
    let spec = a.eigenvalues();
    let min = spec.last().copied().unwrap_or(0.0);
    if min < -PSD_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotPsd(min));
    }
    Ok(shannon_raw(&spec))
}

/// Von Neumann entropy of a state.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_raw(&rho.eigenvalues())
}

/// `h₂(p) = η(p) + η(1−p)`
pub fn binary_entropy(p: f64) -> Result<f64> {
    if p.is_nan() || p < -DOMAIN_SLACK || p > 1.0 + DOMAIN_SLACK {
        return Err(invalid(format!("binary entropy requires p in [0,1], got {p}")));
    }
    Ok(h2_raw(p))
}

/// `g(ε) = (1+ε) h₂(ε/(1+ε)) = (1+ε)log(1+ε) − ε log ε`
pub fn g_func(eps: f64) -> Result<f64> {
    Ok(g_raw(check_nonneg(eps, "g")?))
}

/// Precomputed `log σ` and kernel of a reference state, for evaluating
/// `H(ρ‖σ)` against many `ρ`.
pub struct LogReference {
    dim: usize,
    log: HermitianMatrix,
    kernel: Vec<Vec<Complex64>>,
}

impl LogReference {
    pub fn new(sigma: &DensityMatrix) -> Self {
        let spec = sigma.eig();
        let log = spec.map(|x| if x > SUPPORT_TOL { x.ln() } else { 0.0 });
        let kernel = spec
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, x)| **x <= SUPPORT_TOL)
            .map(|(k, _)| spec.vector(k))
            .collect();
        Self {
            dim: sigma.dim(),
            log,
            kernel,
        }
    }

    /// `H(ρ‖σ) = Tr ρ log ρ − Tr ρ log σ`, or `+∞` if `supp ρ ⊄ supp σ`.
    pub fn relative_entropy(&self, rho: &DensityMatrix) -> Result<ExtendedReal> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch(rho.dim(), self.dim));
        }
        let spec = rho.eig();
        if !self.kernel.is_empty() {
            for (k, lam) in spec.eigenvalues.iter().enumerate() {
                if *lam <= SUPPORT_TOL {
                    continue;
                }
                let v = spec.vector(k);
                let overlap: f64 = self
                    .kernel
                    .iter()
                    .map(|w| w.iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr())
                    .sum();
                if overlap > SUPPORT_TOL {
                    return Ok(ExtendedReal::Infinite);
                }
            }
        }
        let neg_entropy: f64 = -spec.eigenvalues.iter().map(|x| eta_raw(*x)).sum::<f64>();
        let cross = rho.trace_product(&self.log)?;
        Ok(ExtendedReal::Finite((neg_entropy - cross).max(0.0)))
    }
}

/// Quantum relative entropy `H(ρ‖σ)`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExtendedReal> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    LogReference::new(sigma).relative_entropy(rho)
}
