//! Finite ensembles `{p_i, ρ_i}`, their Holevo quantity and metric divergences.

use crate::entropy::{shannon_raw, von_neumann_entropy, ExtendedReal, LogReference};
use crate::error::{Error, Result};
use crate::matrix::{jordan_decomposition, trace_norm, HermitianMatrix};
use crate::state::DensityMatrix;

/// Probabilities must sum to one within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-9;

/// Members with `‖ρ_i − σ‖₁` below this are treated as equal to `σ`.
pub const ZERO_DISTANCE_TOL: f64 = 1e-12;

/// Relative-entropy and entropy-difference forms of χ must agree this well.
const CHI_CROSS_CHECK_TOL: f64 = 1e-8;

/// A finite list of states with a probability vector.
#[derive(Clone, Debug)]
pub struct DiscreteEnsemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl DiscreteEnsemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::DimensionMismatch(probs.len(), states.len()));
        }
        if states.is_empty() {
            return Err(Error::InvalidProbabilities("ensemble is empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidProbabilities(format!("negative or non-finite entry {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
        }
        let d = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch(d, s.dim()));
        }
        Ok(Self { probs, states })
    }

    /// Equal weights on every state.
    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let n = states.len().max(1);
        Self::new(vec![1.0 / n as f64; states.len()], states)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.probs.iter().copied().zip(&self.states)
    }

    fn check_dim(&self, sigma: &DensityMatrix) -> Result<()> {
        if sigma.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), sigma.dim()));
        }
        Ok(())
    }
}

/// `ρ̄ = Σ p_i ρ_i`
pub fn average_state(e: &DiscreteEnsemble) -> DensityMatrix {
    let mut acc = HermitianMatrix::zeros(e.dim());
    for (p, rho) in e.iter() {
        acc.add_scaled(p, rho).expect("ensemble dims agree");
    }
    DensityMatrix::from_trusted(acc)
}

/// Holevo quantity `χ = Σ p_i H(ρ_i‖ρ̄)`.
///
/// Also evaluates `H(ρ̄) − Σ p_i H(ρ_i)` and asserts the two agree, which
/// catches eigensolver drift.
pub fn holevo_chi(e: &DiscreteEnsemble) -> f64 {
    let avg = average_state(e);
    let reference = LogReference::new(&avg);
    let mut rel_form = ExtendedReal::Finite(0.0);
    let mut mean_entropy = 0.0;
    for (p, rho) in e.iter() {
        if p == 0.0 {
            continue;
        }
        mean_entropy += p * von_neumann_entropy(rho);
        if let ExtendedReal::Finite(acc) = rel_form {
            rel_form = match reference.relative_entropy(rho).expect("ensemble dims agree") {
                ExtendedReal::Finite(r) => ExtendedReal::Finite(acc + p * r),
                ExtendedReal::Infinite => ExtendedReal::Infinite,
            };
        }
    }
    let diff_form = (von_neumann_entropy(&avg) - mean_entropy).max(0.0);
    match rel_form {
        ExtendedReal::Finite(chi) => {
            assert!(
                (chi - diff_form).abs() <= CHI_CROSS_CHECK_TOL * chi.max(1.0),
                "Holevo quantity cross-check failed: {chi} vs {diff_form}"
            );
            chi
        }
        // Only reachable through rounding when some p_i is below the support
        // tolerance; the entropy-difference form stays well defined.
        ExtendedReal::Infinite => diff_form,
    }
}

/// Metric divergence `D({p_i,ρ_i}|σ) = ½ Σ p_i ‖ρ_i − σ‖₁`.
pub fn metric_divergence(e: &DiscreteEnsemble, sigma: &DensityMatrix) -> Result<f64> {
    e.check_dim(sigma)?;
    let mut acc = 0.0;
    for (p, rho) in e.iter() {
        if p > 0.0 {
            acc += p * trace_norm(&rho.sub(sigma)?);
        }
    }
    Ok(0.5 * acc)
}

/// `υ_m = ½ max_{i,j} ‖ρ_i − ρ_j‖₁`
pub fn max_pairwise_distance(e: &DiscreteEnsemble) -> f64 {
    let s = e.states();
    let mut best: f64 = 0.0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            best = best.max(0.5 * trace_norm(&s[i].sub(&s[j]).expect("dims agree")));
        }
    }
    best
}

/// The ensembles `{t_i, τ⁺_i}` and `{t_i, τ⁻_i}` built from the Jordan
/// decomposition of `ρ_i − σ`.
#[derive(Clone, Debug)]
pub struct DerivedEnsembles {
    /// `D({p_i,ρ_i}|σ)`
    pub epsilon: f64,
    /// `t_i` for each kept index, in the order of `kept_indices`.
    pub weights: Vec<f64>,
    pub tau_plus: Vec<DensityMatrix>,
    pub tau_minus: Vec<DensityMatrix>,
    pub kept_indices: Vec<usize>,
    /// Members equal to `σ` (zero trace distance); they carry no weight.
    pub dropped_indices: Vec<usize>,
}

impl DerivedEnsembles {
    pub fn plus(&self) -> Option<DiscreteEnsemble> {
        self.ensemble(&self.tau_plus)
    }

    pub fn minus(&self) -> Option<DiscreteEnsemble> {
        self.ensemble(&self.tau_minus)
    }

    fn ensemble(&self, states: &[DensityMatrix]) -> Option<DiscreteEnsemble> {
        if self.epsilon == 0.0 || states.is_empty() {
            return None;
        }
        let total: f64 = self.weights.iter().sum();
        let probs = self.weights.iter().map(|t| t / total).collect();
        DiscreteEnsemble::new(probs, states.to_vec()).ok()
    }

    /// `Σ_i p_i [ρ_i − σ]₊ = ε Σ_i t_i τ⁺_i`
    pub fn weighted_positive_part(&self, dim: usize) -> HermitianMatrix {
        let mut acc = HermitianMatrix::zeros(dim);
        for (t, tau) in self.weights.iter().zip(&self.tau_plus) {
            acc.add_scaled(self.epsilon * t, tau).expect("dims agree");
        }
        acc
    }
}

pub fn derived_ensembles(e: &DiscreteEnsemble, sigma: &DensityMatrix) -> Result<DerivedEnsembles> {
    e.check_dim(sigma)?;
    let mut raw = Vec::new();
    let mut dropped = Vec::new();
    let mut two_eps = 0.0;
    for (i, (p, rho)) in e.iter().enumerate() {
        let diff = rho.sub(sigma)?;
        let (pos, neg) = jordan_decomposition(&diff);
        let tr_pos = pos.trace();
        let tr_neg = neg.trace();
        let norm = tr_pos + tr_neg;
        if norm < ZERO_DISTANCE_TOL {
            dropped.push(i);
            continue;
        }
        two_eps += p * norm;
        raw.push((i, p * norm, pos.scale(1.0 / tr_pos), neg.scale(1.0 / tr_neg)));
    }
    let epsilon = 0.5 * two_eps;
    if two_eps == 0.0 {
        let mut all: Vec<usize> = dropped;
        all.extend(raw.iter().map(|r| r.0));
        all.sort_unstable();
        return Ok(DerivedEnsembles {
            epsilon: 0.0,
            weights: vec![],
            tau_plus: vec![],
            tau_minus: vec![],
            kept_indices: vec![],
            dropped_indices: all,
        });
    }
    let mut out = DerivedEnsembles {
        epsilon,
        weights: Vec::with_capacity(raw.len()),
        tau_plus: Vec::with_capacity(raw.len()),
        tau_minus: Vec::with_capacity(raw.len()),
        kept_indices: Vec::with_capacity(raw.len()),
        dropped_indices: dropped,
    };
    for (i, w, plus, minus) in raw {
        out.kept_indices.push(i);
        out.weights.push(w / two_eps);
        out.tau_plus.push(DensityMatrix::from_trusted(plus));
        out.tau_minus.push(DensityMatrix::from_trusted(minus));
    }
    Ok(out)
}

/// `T_χ({p_i,ρ_i}|σ) = ε (χ({t_i,τ⁺_i}) − χ({t_i,τ⁻_i}))`
pub fn t_chi(e: &DiscreteEnsemble, sigma: &DensityMatrix) -> Result<f64> {
    let derived = derived_ensembles(e, sigma)?;
    Ok(t_chi_from(&derived))
}

pub(crate) fn t_chi_from(derived: &DerivedEnsembles) -> f64 {
    match (derived.plus(), derived.minus()) {
        (Some(plus), Some(minus)) => derived.epsilon * (holevo_chi(&plus) - holevo_chi(&minus)),
        _ => 0.0,
    }
}

/// Shannon entropy of the probability vector.
pub fn probability_entropy(e: &DiscreteEnsemble) -> f64 {
    shannon_raw(e.probs())
}
