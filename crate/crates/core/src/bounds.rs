//! Closed-form upper bounds on the Holevo quantity.
//!
//! All values are in nats. Each bound is reported under a stable name
//! together with the reference state it was evaluated at.

use serde::Serialize;

use crate::divergence::{amd_optimal, mmd_optimal, DivergenceSolution, SolverConfig};
use crate::ensemble::{
    average_state, derived_ensembles, holevo_chi, max_pairwise_distance, metric_divergence,
    t_chi_from, DiscreteEnsemble,
};
use crate::entropy::{g_raw, h2_raw, shannon_raw, von_neumann_entropy_ext};
use crate::error::{invalid, Result};
use crate::matrix::{trace_norm, HermitianMatrix};
use crate::state::{trace_distance, DensityMatrix};

/// Probabilities this close to one leave no room for a complementary state.
const DEGENERATE_PROB_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: f64,
    pub reference: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub chi_exact: f64,
    pub entries: Vec<BoundEntry>,
}

impl BoundReport {
    pub fn new(chi_exact: f64) -> Self {
        Self {
            chi_exact,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, name: &str, value: f64, reference: &str) {
        self.entries.push(BoundEntry {
            name: name.to_string(),
            value,
            reference: reference.to_string(),
        });
    }

    pub fn extend(&mut self, entries: impl IntoIterator<Item = BoundEntry>) {
        self.entries.extend(entries);
    }

    pub fn get(&self, name: &str, reference: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.name == name && e.reference == reference)
            .map(|e| e.value)
    }

    /// The smallest bound in the report.
    pub fn best(&self) -> Option<&BoundEntry> {
        self.entries.iter().min_by(|a, b| a.value.total_cmp(&b.value))
    }
}

fn entry(name: &str, value: f64, reference: &str) -> BoundEntry {
    BoundEntry {
        name: name.to_string(),
        value,
        reference: reference.to_string(),
    }
}

/// Reference-state tags used in reports.
pub mod reference {
    pub const NONE: &str = "none";
    pub const CHAOTIC: &str = "chaotic";
    pub const AVERAGE: &str = "average";
    pub const AMD: &str = "amd";
    pub const MMD: &str = "mmd";

    /// Tag for the ensemble member with zero-based index `i` (printed one-based).
    pub fn state(i: usize) -> String {
        format!("state-{}", i + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AudenaertBounds {
    pub upsilon_m: f64,
    /// `υ_m S({p_i})`
    pub bound_s: f64,
    /// `υ_m log n`
    pub bound_log_n: f64,
}

pub fn audenaert_bounds(e: &DiscreteEnsemble) -> AudenaertBounds {
    let upsilon_m = max_pairwise_distance(e);
    AudenaertBounds {
        upsilon_m,
        bound_s: upsilon_m * shannon_raw(e.probs()),
        bound_log_n: upsilon_m * (e.len() as f64).ln(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prop1Bounds {
    pub epsilon: f64,
    /// `T_χ + g(ε)`
    pub m_ineq: f64,
    /// `ε χ({t_i,τ⁺_i}) + g(ε)`
    pub m_ub: f64,
    /// `S({½p_i‖ρ_i−σ‖₁}) + g(ε)`
    pub m_ub_1: f64,
    /// `H(Σ p_i[ρ_i−σ]₊) + g(ε)`
    pub m_ub_2: f64,
}

pub fn prop1_bounds(e: &DiscreteEnsemble, sigma: &DensityMatrix) -> Result<Prop1Bounds> {
    let derived = derived_ensembles(e, sigma)?;
    let eps = derived.epsilon;
    let g = g_raw(eps);
    let chi_plus = derived.plus().map(|p| holevo_chi(&p)).unwrap_or(0.0);
    let mut halves = Vec::with_capacity(e.len());
    for (p, rho) in e.iter() {
        halves.push(p * trace_distance(rho, sigma)?);
    }
    let positive = derived.weighted_positive_part(e.dim());
    Ok(Prop1Bounds {
        epsilon: eps,
        m_ineq: t_chi_from(&derived) + g,
        m_ub: eps * chi_plus + g,
        m_ub_1: shannon_raw(&halves) + g,
        m_ub_2: von_neumann_entropy_ext(&positive)? + g,
    })
}

impl Prop1Bounds {
    pub fn entries(&self, reference: &str) -> Vec<BoundEntry> {
        vec![
            entry("m-ineq", self.m_ineq, reference),
            entry("m-ub", self.m_ub, reference),
            entry("m-ub-1", self.m_ub_1, reference),
            entry("m-ub-2", self.m_ub_2, reference),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Corollary1Bounds {
    pub epsilon: f64,
    /// `½ sup_i‖ρ_i−σ‖₁ S({p_j}) + g(ε)`
    pub sup_s: f64,
    /// `ε log n + g(ε)`
    pub log_n: f64,
    /// `ε log d + g(ε)`
    pub log_d: f64,
}

pub fn corollary1_bounds(e: &DiscreteEnsemble, sigma: &DensityMatrix) -> Result<Corollary1Bounds> {
    let eps = metric_divergence(e, sigma)?;
    let mut sup: f64 = 0.0;
    for rho in e.states() {
        sup = sup.max(trace_distance(rho, sigma)?);
    }
    let g = g_raw(eps);
    Ok(Corollary1Bounds {
        epsilon: eps,
        sup_s: sup * shannon_raw(e.probs()) + g,
        log_n: eps * (e.len() as f64).ln() + g,
        log_d: eps * (e.dim() as f64).ln() + g,
    })
}

impl Corollary1Bounds {
    pub fn entries(&self, reference: &str) -> Vec<BoundEntry> {
        vec![
            entry("ec-ub.1", self.sup_s, reference),
            entry("ec-ub.2", self.log_n, reference),
            entry("ec-ub.3", self.log_d, reference),
        ]
    }
}

/// Complementary state `ρ̂_i = (1−p_i)⁻¹ Σ_{j≠i} p_j ρ_j`, or `None` when `p_i = 1`.
pub fn complementary_state(e: &DiscreteEnsemble, i: usize) -> Option<HermitianMatrix> {
    let p = e.probs()[i];
    if 1.0 - p < DEGENERATE_PROB_TOL {
        return None;
    }
    let mut acc = HermitianMatrix::zeros(e.dim());
    for (j, (q, rho)) in e.iter().enumerate() {
        if j != i {
            acc.add_scaled(q / (1.0 - p), rho).expect("dims agree");
        }
    }
    Some(acc)
}

/// Bounds with `σ = ρ̄`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AverageStateBounds {
    /// `½ Σ p_i‖ρ_i−ρ̄‖₁`
    pub epsilon: f64,
    /// The same quantity via `½ Σ p_i(1−p_i)‖ρ_i−ρ̂_i‖₁`.
    pub epsilon_complementary: f64,
    pub upsilon_m: f64,
    /// `υ_m (1 − Σ p_i²)`
    pub epsilon_majorant: f64,
    pub entries: Vec<BoundEntry>,
}

pub fn avg_state_bounds(e: &DiscreteEnsemble) -> AverageStateBounds {
    let avg = average_state(e);
    let d = e.dim() as f64;
    let n = e.len() as f64;
    let upsilon_m = max_pairwise_distance(e);
    let collision: f64 = e.probs().iter().map(|p| p * p).sum();
    let majorant = upsilon_m * (1.0 - collision);

    let mut eps = 0.0;
    let mut weights = Vec::with_capacity(e.len());
    for (i, (p, rho)) in e.iter().enumerate() {
        eps += p * trace_distance(rho, &avg).expect("dims agree");
        let w = match complementary_state(e, i) {
            Some(hat) => 0.5 * p * (1.0 - p) * trace_norm(&rho.sub(&hat).expect("dims agree")),
            None => 0.0,
        };
        weights.push(w);
    }
    let eps_hat: f64 = weights.iter().sum();

    let spread: Vec<f64> = e.probs().iter().map(|p| p * (1.0 - p)).collect();
    let g = g_raw(eps);
    let g_star = g_raw(majorant);
    let s_weights = shannon_raw(&weights);
    let s_spread = upsilon_m * shannon_raw(&spread);
    let log_n = majorant * n.ln();
    let r = reference::AVERAGE;
    let entries = vec![
        entry("a-state-1.1", s_weights + g, r),
        entry("a-state-1.2", s_spread + g, r),
        entry("a-state-1.3", log_n + g, r),
        entry("a-state-1.1*", s_weights + g_star, r),
        entry("a-state-1.2*", s_spread + g_star, r),
        entry("a-state-1.3*", log_n + g_star, r),
        entry("a-state-2.1", eps * d.ln() + g, r),
        entry("a-state-2.2", majorant * d.ln() + g_star, r),
    ];
    AverageStateBounds {
        epsilon: eps,
        epsilon_complementary: eps_hat,
        upsilon_m,
        epsilon_majorant: majorant,
        entries,
    }
}

/// Bounds with `σ = ρ_{i0}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingleStateBounds {
    pub index: usize,
    /// `ε₁ = ½ Σ_{i≠i0} p_i‖ρ_i−ρ_{i0}‖₁`
    pub epsilon: f64,
    /// `υ₁ = ½ max_{i≠i0} ‖ρ_i−ρ_{i0}‖₁`
    pub upsilon: f64,
    pub entries: Vec<BoundEntry>,
}

pub fn single_state_bounds(e: &DiscreteEnsemble, i0: usize) -> Result<SingleStateBounds> {
    if i0 >= e.len() {
        return Err(invalid(format!("state index {i0} out of range for {} states", e.len())));
    }
    let anchor = &e.states()[i0];
    let p0 = e.probs()[i0];
    let d = e.dim() as f64;
    let mut eps = 0.0;
    let mut upsilon: f64 = 0.0;
    let mut weighted = Vec::with_capacity(e.len());
    for (i, (p, rho)) in e.iter().enumerate() {
        if i == i0 {
            continue;
        }
        let t = trace_distance(rho, anchor)?;
        eps += p * t;
        upsilon = upsilon.max(t);
        weighted.push(p * t);
    }
    // ε₁ S({p_i t_i / ε₁}) = S({p_i t_i}) by homogeneity
    let first = shannon_raw(&weighted) + g_raw(eps);
    let second = upsilon * shannon_raw(e.probs()) + (g_raw((1.0 - p0) * upsilon) - upsilon * h2_raw(1.0 - p0));
    let r = reference::state(i0);
    let entries = vec![
        entry("1-state-1.1", first, &r),
        entry("1-state-1.2", second, &r),
        entry("1-state-2.1", eps * d.ln() + g_raw(eps), &r),
        entry("1-state-2.2", upsilon * (1.0 - p0) * d.ln() + g_raw(upsilon * (1.0 - p0)), &r),
    ];
    Ok(SingleStateBounds {
        index: i0,
        epsilon: eps,
        upsilon,
        entries,
    })
}

/// Bounds in terms of the average and maximal metric divergences.
pub fn divergence_bounds(e: &DiscreteEnsemble, eps_av: f64, eps_m: f64) -> Result<Vec<BoundEntry>> {
    if !(eps_av >= 0.0) || !(eps_m >= 0.0) {
        return Err(invalid(format!(
            "metric divergences must be nonnegative, got {eps_av} and {eps_m}"
        )));
    }
    let n = e.len() as f64;
    let d = e.dim() as f64;
    Ok(vec![
        entry("amd-ub.log-n", eps_av * n.ln() + g_raw(eps_av), reference::AMD),
        entry("amd-ub.log-d", eps_av * d.ln() + g_raw(eps_av), reference::AMD),
        entry("mmd-ub", eps_m * shannon_raw(e.probs()) + g_raw(eps_m), reference::MMD),
    ])
}

/// Every bound for every reference state, given solved AMD and MMD problems.
pub fn bound_report(e: &DiscreteEnsemble, amd: &DivergenceSolution, mmd: &DivergenceSolution) -> Result<BoundReport> {
    let mut report = BoundReport::new(holevo_chi(e));
    let aud = audenaert_bounds(e);
    report.push("A-ub", aud.bound_s, reference::NONE);
    report.push("A-ub+", aud.bound_log_n, reference::NONE);

    let mut references: Vec<(String, DensityMatrix)> = vec![
        (reference::CHAOTIC.to_string(), DensityMatrix::chaotic(e.dim())),
        (reference::AVERAGE.to_string(), average_state(e)),
    ];
    for (i, rho) in e.states().iter().enumerate() {
        references.push((reference::state(i), rho.clone()));
    }
    references.push((reference::AMD.to_string(), amd.optimal_state.clone()));
    references.push((reference::MMD.to_string(), mmd.optimal_state.clone()));
    for (tag, sigma) in &references {
        report.extend(prop1_bounds(e, sigma)?.entries(tag));
        report.extend(corollary1_bounds(e, sigma)?.entries(tag));
    }

    report.extend(avg_state_bounds(e).entries);
    for i in 0..e.len() {
        report.extend(single_state_bounds(e, i)?.entries);
    }
    report.extend(divergence_bounds(e, amd.value, mmd.value)?);
    Ok(report)
}

/// Solves the AMD and MMD problems and assembles [`bound_report`].
pub fn full_report(e: &DiscreteEnsemble, cfg: &SolverConfig) -> Result<BoundReport> {
    let amd = amd_optimal(e, cfg)?;
    let mmd = mmd_optimal(e.states(), cfg)?;
    bound_report(e, &amd, &mmd)
}
