//! Average and maximal metric divergence: minimizing
//! `σ ↦ ½ Σ p_i ‖ρ_i − σ‖₁` (AMD) and `σ ↦ ½ max_i ‖ρ_i − σ‖₁` (MMD, the
//! Chebyshev center of the states) over density matrices.
//!
//! Both objectives are convex and nonsmooth. The solver is projected
//! subgradient descent on the set of states:
//!
//! * the subgradient of `½‖ρ_i − σ‖₁` in `σ` is `−½(P₊ − P₋)` where `P±` are
//!   the support projectors of the positive and negative parts of `ρ_i − σ`;
//!   for the max objective the active subgradients are averaged;
//! * projection onto `{σ ≥ 0, Tr σ = 1}` projects the spectrum onto the
//!   probability simplex;
//! * steps are `c/√k` with `c` starting at the initial objective value and
//!   halved at the end of every epoch, each epoch restarting from the best
//!   iterate seen so far. A descent has converged once `c` drops below a
//!   quarter of the requested tolerance.
//!
//! Warm starts are `ρ̄`, `I/d`, the best ensemble member, and
//! `SolverConfig::restarts` random full-rank states. Every ensemble member
//! is also evaluated as a candidate, so the returned value never exceeds the
//! objective at `ρ̄` or at any `ρ_i`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ensemble::{average_state, DiscreteEnsemble};
use crate::error::{invalid, Error, Result};
use crate::matrix::HermitianMatrix;
use crate::sample::random_state;
use crate::state::DensityMatrix;

const EPOCH_LEN: usize = 200;
const EPOCH_PATIENCE: usize = 50;
const ACTIVE_TOL: f64 = 1e-9;
const DUAL_ITERS: usize = 500;
const DUAL_STEP: f64 = 2.0;
const DUAL_SMOOTHING: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-4,
            max_iters: 50_000,
            restarts: 5,
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(invalid(format!("solver tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DivergenceSolution {
    pub optimal_state: DensityMatrix,
    pub value: f64,
    pub iterations: usize,
    /// Gap between `value` and the best lower bound on the optimum known to
    /// the solver. For MMD this is a cutting-plane dual bound at the final
    /// active set; for AMD it is the spread of final values over restarts.
    pub certified_gap: f64,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Average,
    Max,
}

struct Problem<'a> {
    kind: Kind,
    states: &'a [DensityMatrix],
    weights: Vec<f64>,
    dim: usize,
}

/// Objective value plus the per-term data needed for subgradients.
struct Evaluation {
    value: f64,
    subgradient: HermitianMatrix,
    terms: Vec<f64>,
    signs: Vec<Option<HermitianMatrix>>,
}

impl<'a> Problem<'a> {
    fn term(&self, i: usize, sigma: &HermitianMatrix) -> (f64, HermitianMatrix) {
        let spec = self.states[i].sub(sigma).expect("dims agree").eig();
        let value = 0.5 * spec.eigenvalues.iter().map(|x| x.abs()).sum::<f64>();
        let sign = spec.map(|x| {
            if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            }
        });
        (value, sign)
    }

    fn value(&self, sigma: &HermitianMatrix) -> f64 {
        let vals = (0..self.states.len()).filter(|i| self.weights[*i] > 0.0).map(|i| {
            let d = self.states[i].sub(sigma).expect("dims agree");
            0.5 * d.eigenvalues().iter().map(|x| x.abs()).sum::<f64>()
        });
        match self.kind {
            Kind::Average => vals
                .zip(self.weights.iter().filter(|w| **w > 0.0))
                .map(|(v, w)| v * w)
                .sum(),
            Kind::Max => vals.fold(0.0, f64::max),
        }
    }

    fn evaluate(&self, sigma: &HermitianMatrix) -> Evaluation {
        let n = self.states.len();
        let mut terms = vec![0.0; n];
        let mut signs = vec![None; n];
        let mut sub = HermitianMatrix::zeros(self.dim);
        let value = match self.kind {
            Kind::Average => {
                for i in 0..n {
                    if self.weights[i] > 0.0 {
                        let (v, s) = self.term(i, sigma);
                        terms[i] = v;
                        sub.add_scaled(-0.5 * self.weights[i], &s).expect("dims agree");
                        signs[i] = Some(s);
                    }
                }
                terms.iter().zip(&self.weights).map(|(t, w)| t * w).sum()
            }
            Kind::Max => {
                for i in 0..n {
                    if self.weights[i] > 0.0 {
                        let diff = self.states[i].sub(sigma).expect("dims agree");
                        terms[i] = 0.5 * diff.eigenvalues().iter().map(|x| x.abs()).sum::<f64>();
                    }
                }
                let fmax = terms.iter().copied().fold(0.0, f64::max);
                let active: Vec<usize> = (0..n)
                    .filter(|i| self.weights[*i] > 0.0 && terms[*i] >= fmax - ACTIVE_TOL)
                    .collect();
                let share = -0.5 / active.len().max(1) as f64;
                for &i in &active {
                    let (_, s) = self.term(i, sigma);
                    sub.add_scaled(share, &s).expect("dims agree");
                    signs[i] = Some(s);
                }
                fmax
            }
        };
        Evaluation {
            value,
            subgradient: sub,
            terms,
            signs,
        }
    }

    /// Lower bound on `min_σ max_i f_i(σ)` from linearizations at `sigma`.
    /// For weights `w` on the simplex,
    /// `max_i f_i(σ') ≥ Σ w_i (f_i(σ) − ⟨g_i, σ⟩) + λ_min(Σ w_i g_i)` for every
    /// state `σ'`. The right side is concave in `w` and is maximized by
    /// exponentiated-gradient ascent.
    fn max_dual_bound(&self, sigma: &HermitianMatrix, eval: &Evaluation) -> f64 {
        let active: Vec<usize> = (0..self.states.len()).filter(|i| self.weights[*i] > 0.0).collect();
        let grads: Vec<HermitianMatrix> = active
            .iter()
            .map(|&i| match &eval.signs[i] {
                Some(s) => s.scale(-0.5),
                None => self.term(i, sigma).1.scale(-0.5),
            })
            .collect();
        let consts: Vec<f64> = active
            .iter()
            .zip(&grads)
            .map(|(&i, g)| eval.terms[i] - g.trace_product(sigma).expect("dims agree"))
            .collect();
        let k = grads.len();
        let mut w = vec![1.0 / k as f64; k];
        let mut best = f64::NEG_INFINITY;
        for t in 1..=DUAL_ITERS {
            let mut g = HermitianMatrix::zeros(self.dim);
            for (wi, gi) in w.iter().zip(&grads) {
                g.add_scaled(*wi, gi).expect("dims agree");
            }
            let spec = g.eig();
            let lam = spec.min_eigenvalue();
            let value = w.iter().zip(&consts).map(|(a, b)| a * b).sum::<f64>() + lam;
            best = best.max(value);
            if k == 1 {
                break;
            }
            // ascent direction from a Gibbs-smoothed minimal eigenprojector
            let gibbs = spec.map(|x| (-(x - lam) / DUAL_SMOOTHING).exp());
            let z = gibbs.trace();
            let step = DUAL_STEP / (t as f64).sqrt();
            let mut total = 0.0;
            for j in 0..k {
                let supergrad = consts[j] + grads[j].trace_product(&gibbs).expect("dims agree") / z;
                w[j] *= (step * supergrad).exp();
                total += w[j];
            }
            for x in &mut w {
                *x /= total;
            }
        }
        best.max(0.0)
    }
}

/// Euclidean projection of `v` onto the probability simplex.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Nearest density matrix in Frobenius norm.
pub(crate) fn project_to_states(m: &HermitianMatrix) -> HermitianMatrix {
    let spec = m.eig();
    let vals = project_simplex(&spec.eigenvalues);
    HermitianMatrix::from_spectrum(&vals, &spec.eigenvectors)
}

struct Descent {
    sigma: HermitianMatrix,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn descend(problem: &Problem<'_>, start: &HermitianMatrix, budget: usize, tol: f64) -> Descent {
    let d = problem.dim;
    let mut x = start.clone();
    let mut best = start.clone();
    let mut best_value = f64::INFINITY;
    let mut scale = problem.value(start).max(tol);
    let mut iterations = 0;
    loop {
        let mut stale = 0;
        for k in 1..=EPOCH_LEN {
            let eval = problem.evaluate(&x);
            if eval.value < best_value {
                best_value = eval.value;
                best = x.clone();
                stale = 0;
            } else {
                stale += 1;
                if stale == EPOCH_PATIENCE {
                    break;
                }
            }
            let mut g = eval.subgradient;
            let tr = g.trace() / d as f64;
            g.add_scaled(-tr, &HermitianMatrix::identity(d)).expect("dims agree");
            let gnorm = g.frobenius_norm();
            if gnorm < 1e-14 {
                return Descent {
                    sigma: best,
                    value: best_value,
                    iterations,
                    converged: true,
                };
            }
            let step = scale / (k as f64).sqrt();
            let mut y = x;
            y.add_scaled(-step / gnorm, &g).expect("dims agree");
            x = project_to_states(&y);
            iterations += 1;
            if iterations >= budget {
                let v = problem.value(&x);
                if v < best_value {
                    best_value = v;
                    best = x;
                }
                return Descent {
                    sigma: best,
                    value: best_value,
                    iterations,
                    converged: false,
                };
            }
        }
        scale *= 0.5;
        x = best.clone();
        if scale < 0.25 * tol {
            return Descent {
                sigma: best,
                value: best_value,
                iterations,
                converged: true,
            };
        }
    }
}

fn solve(problem: Problem<'_>, average: &DensityMatrix, cfg: &SolverConfig) -> Result<DivergenceSolution> {
    cfg.validate()?;
    let d = problem.dim;

    // Every member is a free candidate; the best one also seeds a descent.
    let mut best_member = 0;
    let mut best_member_value = f64::INFINITY;
    for (i, rho) in problem.states.iter().enumerate() {
        if problem.weights[i] == 0.0 {
            continue;
        }
        let v = problem.value(rho);
        if v < best_member_value {
            best_member_value = v;
            best_member = i;
        }
    }

    let mut starts: Vec<HermitianMatrix> = vec![
        average.as_hermitian().clone(),
        DensityMatrix::chaotic(d).into_hermitian(),
        problem.states[best_member].as_hermitian().clone(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        starts.push(random_state(d, d, &mut rng).into_hermitian());
    }

    let budget = (cfg.max_iters / starts.len()).max(1);
    let mut total_iters = 0;
    let mut any_converged = false;
    let mut finals = Vec::with_capacity(starts.len());
    let mut best: Option<(HermitianMatrix, f64)> = None;
    for start in &starts {
        let run = descend(&problem, start, budget, cfg.tolerance);
        total_iters += run.iterations;
        any_converged |= run.converged;
        finals.push(run.value);
        // ties go to the earliest start
        if best.as_ref().is_none_or(|(_, v)| run.value < *v) {
            best = Some((run.sigma, run.value));
        }
    }
    let (mut sigma, _) = best.expect("at least one start");
    if best_member_value < problem.value(&sigma) {
        sigma = problem.states[best_member].as_hermitian().clone();
    }

    let eval = problem.evaluate(&sigma);
    let certified_gap = match problem.kind {
        Kind::Average => {
            let lo = finals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (hi - lo).max(0.0)
        }
        Kind::Max => {
            let lb = problem.max_dual_bound(&sigma, &eval);
            (eval.value - lb).max(0.0)
        }
    };
    let solution = DivergenceSolution {
        optimal_state: DensityMatrix::from_trusted(sigma),
        value: eval.value,
        iterations: total_iters,
        certified_gap,
    };
    if any_converged {
        Ok(solution)
    } else {
        Err(Error::NonConvergence {
            iterations: total_iters,
            best: Box::new(solution),
        })
    }
}

/// Minimizes `½ Σ p_i ‖ρ_i − σ‖₁` over states `σ`.
pub fn amd_optimal(e: &DiscreteEnsemble, cfg: &SolverConfig) -> Result<DivergenceSolution> {
    let problem = Problem {
        kind: Kind::Average,
        states: e.states(),
        weights: e.probs().to_vec(),
        dim: e.dim(),
    };
    solve(problem, &average_state(e), cfg)
}

/// Minimizes `½ max_i ‖ρ_i − σ‖₁` over states `σ`; probabilities play no role.
pub fn mmd_optimal(states: &[DensityMatrix], cfg: &SolverConfig) -> Result<DivergenceSolution> {
    let first = states.first().ok_or_else(|| invalid("state list is empty"))?;
    let d = first.dim();
    if let Some(s) = states.iter().find(|s| s.dim() != d) {
        return Err(Error::DimensionMismatch(d, s.dim()));
    }
    let ensemble = DiscreteEnsemble::uniform(states.to_vec())?;
    let problem = Problem {
        kind: Kind::Max,
        states,
        weights: vec![1.0; states.len()],
        dim: d,
    };
    solve(problem, &average_state(&ensemble), cfg)
}

/// Chebyshev radius of a finite set of states in the trace-distance metric.
pub fn chebyshev_radius(states: &[DensityMatrix], cfg: &SolverConfig) -> Result<f64> {
    Ok(mmd_optimal(states, cfg)?.value)
}

/// Objective of the AMD problem at `sigma`.
pub fn amd_objective(e: &DiscreteEnsemble, sigma: &DensityMatrix) -> Result<f64> {
    crate::ensemble::metric_divergence(e, sigma)
}

/// Objective of the MMD problem at `sigma`.
pub fn mmd_objective(states: &[DensityMatrix], sigma: &DensityMatrix) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for rho in states {
        worst = worst.max(crate::state::trace_distance(rho, sigma)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{make_pure_state_real, trace_distance};

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        for x in &p {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let q = project_simplex(&[0.2, 0.3, 0.5]);
        assert!((q[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn projection_keeps_states_fixed() {
        let rho = make_pure_state_real(&[0.6, 0.8]).unwrap();
        let p = project_to_states(&rho);
        assert!(p.sub(&rho).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn single_state_is_its_own_optimum() {
        let rho = make_pure_state_real(&[1.0, 2.0, 2.0]).unwrap();
        let e = DiscreteEnsemble::uniform(vec![rho.clone()]).unwrap();
        let sol = amd_optimal(&e, &SolverConfig::default()).unwrap();
        assert!(sol.value < 1e-12);
        assert!(trace_distance(&sol.optimal_state, &rho).unwrap() < 1e-9);
        let sol = mmd_optimal(&[rho.clone()], &SolverConfig::default()).unwrap();
        assert!(sol.value < 1e-4);
    }

    #[test]
    fn two_state_closed_forms() {
        let r1 = make_pure_state_real(&[1.0, 0.0]).unwrap();
        let r2 = make_pure_state_real(&[0.6, 0.8]).unwrap();
        let dist = trace_distance(&r1, &r2).unwrap();
        let e = DiscreteEnsemble::new(vec![0.7, 0.3], vec![r1.clone(), r2.clone()]).unwrap();
        let cfg = SolverConfig::default();
        let amd = amd_optimal(&e, &cfg).unwrap();
        assert!((amd.value - 0.3 * dist).abs() < 1e-4);
        let mmd = mmd_optimal(&[r1.clone(), r2.clone()], &cfg).unwrap();
        assert!((mmd.value - 0.5 * dist).abs() < 1e-4);
    }

    #[test]
    fn rejects_empty_and_bad_config() {
        assert!(mmd_optimal(&[], &SolverConfig::default()).is_err());
        let cfg = SolverConfig {
            tolerance: 0.0,
            ..SolverConfig::default()
        };
        assert!(mmd_optimal(&[DensityMatrix::chaotic(2)], &cfg).is_err());
    }

    #[test]
    fn tiny_budget_reports_non_convergence_with_best_iterate() {
        let states = vec![
            DensityMatrix::basis(3, 0),
            make_pure_state_real(&[0.6, 0.8, 0.0]).unwrap(),
            make_pure_state_real(&[0.0, 0.3, 1.0]).unwrap(),
        ];
        let cfg = SolverConfig {
            max_iters: 5,
            ..SolverConfig::default()
        };
        match mmd_optimal(&states, &cfg) {
            Err(Error::NonConvergence { best, .. }) => assert!(best.value <= 1.0),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
