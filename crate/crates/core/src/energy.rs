//! Energy-constrained bounds for systems whose Hamiltonian has a
//! thermodynamically well-behaved spectrum, specialized to the `ℓ`-mode
//! harmonic oscillator `H = Σ ħω_i (a_i†a_i + ½)`.
//!
//! Energies include the zero-point term. Entropies are in nats.

use serde::Serialize;

use crate::entropy::{g_raw, h2_raw, shannon_raw};
use crate::error::{invalid, Result};

const GRID_POINTS: usize = 400;
const GOLDEN_ITERS: usize = 200;
/// Lower end of the `t` grid relative to the upper end `a`.
const T_GRID_FLOOR: f64 = 1e-6;
/// The scalar minimizer sits near `b/(3x)`, so its grid reaches further down.
const LEMMA_GRID_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OscillatorSpec {
    hbar_omega: Vec<f64>,
}

impl OscillatorSpec {
    pub fn new(hbar_omega: Vec<f64>) -> Result<Self> {
        if hbar_omega.is_empty() {
            return Err(invalid("an oscillator needs at least one mode"));
        }
        if let Some(w) = hbar_omega.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(invalid(format!("mode energies must be positive, got {w}")));
        }
        Ok(Self { hbar_omega })
    }

    /// `ℓ` modes of equal energy `ħω`.
    pub fn uniform(modes: usize, hbar_omega: f64) -> Result<Self> {
        Self::new(vec![hbar_omega; modes])
    }

    pub fn modes(&self) -> usize {
        self.hbar_omega.len()
    }

    pub fn hbar_omega(&self) -> &[f64] {
        &self.hbar_omega
    }

    /// `E₀ = ½ Σ ħω_i`
    pub fn ground_energy(&self) -> f64 {
        0.5 * self.hbar_omega.iter().sum::<f64>()
    }

    /// `(Π ħω_i)^{1/ℓ}`
    pub fn geometric_mean(&self) -> f64 {
        let l = self.modes() as f64;
        (self.hbar_omega.iter().map(|w| w.ln()).sum::<f64>() / l).exp()
    }

    /// Mean energy of the Gibbs state at inverse temperature `lambda`.
    fn thermal_energy(&self, lambda: f64) -> f64 {
        self.hbar_omega
            .iter()
            .map(|w| w * (occupation(lambda * w) + 0.5))
            .sum()
    }
}

/// Bose occupation `1/(e^x − 1)`.
fn occupation(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

pub fn oscillator_ground_energy(spec: &OscillatorSpec) -> f64 {
    spec.ground_energy()
}

/// `F̂(E) = ℓ log((E + E₀)/(ℓ E_g)) + ℓ` with `E_g` the geometric mean of `ħω_i`.
pub fn hat_f(spec: &OscillatorSpec, energy: f64) -> Result<f64> {
    if !(energy >= 0.0) {
        return Err(invalid(format!("energy must be nonnegative, got {energy}")));
    }
    Ok(hat_f_raw(spec, energy))
}

fn hat_f_raw(spec: &OscillatorSpec, energy: f64) -> f64 {
    let l = spec.modes() as f64;
    l * ((energy + spec.ground_energy()) / (l * spec.geometric_mean())).ln() + l
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsState {
    /// Inverse temperature `λ(E)`.
    pub lambda: f64,
    /// Mean occupation number of each mode.
    pub occupations: Vec<f64>,
    /// `F_H(E) = Σ g(N_i)`
    pub entropy: f64,
}

/// The maximum-entropy state at mean energy `E > E₀`, by bisection on `λ`.
pub fn gibbs_entropy(spec: &OscillatorSpec, energy: f64) -> Result<GibbsState> {
    let e0 = spec.ground_energy();
    if !(energy > e0) || !energy.is_finite() {
        return Err(invalid(format!(
            "Gibbs state needs energy above the ground energy {e0}, got {energy}"
        )));
    }
    // thermal_energy decreases from +∞ to E₀ as λ runs over (0, ∞)
    let mut lo = 1e-12 / energy;
    let mut hi = 1e3 / e0;
    while spec.thermal_energy(lo) < energy {
        lo *= 1e-3;
    }
    while spec.thermal_energy(hi) > energy {
        hi *= 1e3;
    }
    for _ in 0..2000 {
        if hi - lo <= 1e-13 * hi {
            break;
        }
        let mid = if hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if spec.thermal_energy(mid) > energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let occupations: Vec<f64> = spec.hbar_omega.iter().map(|w| occupation(lambda * w)).collect();
    let entropy = occupations.iter().map(|n| g_raw(*n)).sum();
    Ok(GibbsState {
        lambda,
        occupations,
        entropy,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyBoundInput {
    /// Metric divergence of the ensemble (or channel) from `σ`.
    pub epsilon: f64,
    /// `Ē(μ)` for ensembles, `E_*` for channels.
    pub avg_energy: f64,
    /// `E(σ)`
    pub sigma_energy: f64,
}

impl EnergyBoundInput {
    pub fn new(epsilon: f64, avg_energy: f64, sigma_energy: f64) -> Result<Self> {
        let input = Self {
            epsilon,
            avg_energy,
            sigma_energy,
        };
        input.validate()?;
        Ok(input)
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(invalid(format!("epsilon must lie in [0,1], got {}", self.epsilon)));
        }
        if !(self.avg_energy > 0.0) || !self.avg_energy.is_finite() {
            return Err(invalid(format!("average energy must be positive, got {}", self.avg_energy)));
        }
        if !(self.sigma_energy >= 0.0) || !self.sigma_energy.is_finite() {
            return Err(invalid(format!(
                "reference energy must be nonnegative, got {}",
                self.sigma_energy
            )));
        }
        Ok(())
    }

    /// Also requires both energies to be at least the ground energy of `spec`.
    pub fn validate_for(&self, spec: &OscillatorSpec) -> Result<()> {
        self.validate()?;
        let e0 = spec.ground_energy();
        if self.avg_energy < e0 || self.sigma_energy < e0 {
            return Err(invalid(format!(
                "energies must be at least the ground energy {e0}, got {} and {}",
                self.avg_energy, self.sigma_energy
            )));
        }
        Ok(())
    }

    /// `κ = ½(1 + E(σ)/Ē)`
    pub fn kappa(&self) -> f64 {
        0.5 * (1.0 + self.sigma_energy / self.avg_energy)
    }
}

/// Result of a one-dimensional minimization over `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TMinimum {
    pub t: f64,
    pub value: f64,
    /// The grid minimum was at an end of the search interval.
    pub at_boundary: bool,
}

/// Minimizes `f` over `[floor·a, a]`: geometric grid, then golden section on
/// the bracket around the best grid point. Ties go to the smallest `t`.
fn minimize_t(a: f64, floor: f64, f: impl Fn(f64) -> f64) -> TMinimum {
    let lo = floor * a;
    let ratio = (a / lo).powf(1.0 / (GRID_POINTS - 1) as f64);
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|k| if k == GRID_POINTS - 1 { a } else { lo * ratio.powi(k as i32) })
        .collect();
    let values: Vec<f64> = grid.iter().map(|t| f(*t)).collect();
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    let at_boundary = best == 0 || best == GRID_POINTS - 1;
    let (mut x0, mut x1) = (grid[best.saturating_sub(1)], grid[(best + 1).min(GRID_POINTS - 1)]);
    let mut result = (grid[best], values[best]);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = x1 - phi * (x1 - x0);
    let mut d = x0 + phi * (x1 - x0);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if x1 - x0 <= 1e-15 * x1 {
            break;
        }
        if fc <= fd {
            x1 = d;
            d = c;
            fd = fc;
            c = x1 - phi * (x1 - x0);
            fc = f(c);
        } else {
            x0 = c;
            c = d;
            fc = fd;
            d = x0 + phi * (x1 - x0);
            fd = f(d);
        }
    }
    for (t, v) in [(c, fc), (d, fd)] {
        if v < result.1 {
            result = (t, v);
        }
    }
    TMinimum {
        t: result.0,
        value: result.1,
        at_boundary,
    }
}

/// `ε((1+κt)/(1−εt) + t)·M(t) + h₂(εt) + g(ε(1+κt)/(1−εt))`
fn prop3_objective(eps: f64, kappa: f64, t: f64, m: f64) -> f64 {
    let f = (1.0 + kappa * t) / (1.0 - eps * t);
    eps * (f + t) * m + h2_raw(eps * t) + g_raw(f * eps)
}

fn zero_minimum() -> TMinimum {
    TMinimum {
        t: 0.0,
        value: 0.0,
        at_boundary: false,
    }
}

/// Upper bound on the Holevo quantity of an ensemble with metric divergence
/// `ε` from `σ` and mean energy `Ē`, for any majorant `M ≥ F_H` that is
/// positive, increasing and concave.
pub fn prop3_bound(input: &EnergyBoundInput, majorant: impl Fn(f64) -> f64) -> Result<TMinimum> {
    input.validate()?;
    let eps = input.epsilon;
    if eps == 0.0 {
        return Ok(zero_minimum());
    }
    let kappa = input.kappa();
    let e = input.avg_energy;
    Ok(minimize_t(0.5 / eps, T_GRID_FLOOR, |t| {
        prop3_objective(eps, kappa, t, majorant(e / (eps * t)))
    }))
}

/// The oscillator form with `F̂(Ē/(εt))` replaced by `F̂(Ē) − ℓ log(εt)`.
pub fn corollary6_bound(spec: &OscillatorSpec, input: &EnergyBoundInput) -> Result<TMinimum> {
    input.validate()?;
    let eps = input.epsilon;
    if eps == 0.0 {
        return Ok(zero_minimum());
    }
    let kappa = input.kappa();
    let base = hat_f_raw(spec, input.avg_energy);
    let l = spec.modes() as f64;
    Ok(minimize_t(0.5 / eps, T_GRID_FLOOR, |t| {
        prop3_objective(eps, kappa, t, base - l * (eps * t).ln())
    }))
}

/// Minimizes `f(t)(x − b log t + c)` over `t ∈ (0, ½)` with
/// `f(t) = (1+t)/(1−t) + t`.
pub fn lemma1_minimize(x: f64, b: f64, c: f64) -> Result<TMinimum> {
    if !(b > 0.0) {
        return Err(invalid(format!("b must be positive, got {b}")));
    }
    if !x.is_finite() || !c.is_finite() {
        return Err(invalid("x and c must be finite"));
    }
    // the open end t = ½ is approached but not evaluated
    let a = 0.5 * (1.0 - 1e-12);
    Ok(minimize_t(a, LEMMA_GRID_FLOOR, |t| {
        ((1.0 + t) / (1.0 - t) + t) * (x - b * t.ln() + c)
    }))
}

/// Energy-constrained capacity bound for a channel with output metric
/// divergence `ε` from `σ` and maximal output energy `E_*`.
pub fn prop4_capacity_bound(
    majorant: impl Fn(f64) -> f64,
    epsilon: f64,
    e_star: f64,
    sigma_energy: f64,
) -> Result<TMinimum> {
    prop3_bound(&EnergyBoundInput::new(epsilon, e_star, sigma_energy)?, majorant)
}

/// [`prop4_capacity_bound`] for an oscillator output with majorant `F̂`.
pub fn prop4_oscillator_bound(
    spec: &OscillatorSpec,
    epsilon: f64,
    e_star: f64,
    sigma_energy: f64,
) -> Result<TMinimum> {
    let input = EnergyBoundInput::new(epsilon, e_star, sigma_energy)?;
    input.validate_for(spec)?;
    prop3_bound(&input, |e| hat_f_raw(spec, e))
}

/// Capacity bounds for `ρ ↦ (1−p)ρ + pσ` on an oscillator with input energy
/// constraint `E`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingChannelBounds {
    pub p: f64,
    pub energy: f64,
    pub sigma_energy: f64,
    /// `(1−p) F_H(E) − h₂(p)`, a lower bound on the capacity.
    pub lower: f64,
    /// `(1−p) F_H(E)`, an upper bound on the capacity.
    pub upper: f64,
    /// `E_* = (1−p)E + pE(σ)`
    pub e_star: f64,
    /// The majorant bound with `ε = 1−p` and `F̂(E_*/(εt))`.
    pub prop4: TMinimum,
    /// The same with `F̂(E_*) − ℓ log(εt)`.
    pub prop4_log: TMinimum,
}

pub fn mixing_channel_bounds(
    spec: &OscillatorSpec,
    energy: f64,
    p: f64,
    sigma_energy: f64,
) -> Result<MixingChannelBounds> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p must lie in [0,1], got {p}")));
    }
    let f_h = gibbs_entropy(spec, energy)?.entropy;
    let eps = 1.0 - p;
    let e_star = (1.0 - p) * energy + p * sigma_energy;
    let prop4 = prop4_oscillator_bound(spec, eps, e_star, sigma_energy)?;
    let input = EnergyBoundInput::new(eps, e_star, sigma_energy)?;
    let prop4_log = corollary6_bound(spec, &input)?;
    Ok(MixingChannelBounds {
        p,
        energy,
        sigma_energy,
        lower: (1.0 - p) * f_h - h2_raw(p),
        upper: (1.0 - p) * f_h,
        e_star,
        prop4,
        prop4_log,
    })
}

/// Quantities of the ensemble `{λ_k, ε|k⟩⟨k| + (1−ε)γ}` on a truncated
/// single-mode Fock space, where `λ_k` are the thermal populations of `γ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsMixtureWitness {
    pub dim: usize,
    pub epsilon: f64,
    /// `F_H(E)` from the closed form.
    pub gibbs_entropy: f64,
    /// Metric divergence of the ensemble from the (truncated) Gibbs state.
    pub divergence: f64,
    pub chi: f64,
    /// `ε F_H(E) − h₂(ε)`
    pub lower_bound: f64,
}

/// Builds the witness ensemble with the Fock cutoff chosen so that the
/// discarded thermal tail has mass below `tail`.
pub fn gibbs_mixture_witness(hbar_omega: f64, energy: f64, epsilon: f64, tail: f64) -> Result<GibbsMixtureWitness> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(invalid(format!("epsilon must lie in [0,1], got {epsilon}")));
    }
    if !(tail > 0.0 && tail < 1.0) {
        return Err(invalid(format!("tail mass must lie in (0,1), got {tail}")));
    }
    let spec = OscillatorSpec::uniform(1, hbar_omega)?;
    let gibbs = gibbs_entropy(&spec, energy)?;
    let n = gibbs.occupations[0];
    let q = n / (n + 1.0);
    let dim = (tail.ln() / q.ln()).ceil() as usize + 1;
    let norm = 1.0 - q.powi(dim as i32);
    let pops: Vec<f64> = (0..dim).map(|k| (1.0 - q) * q.powi(k as i32) / norm).collect();
    // every member is diagonal in the Fock basis
    let mut divergence = 0.0;
    let mut mean_entropy = 0.0;
    let mut member: Vec<f64> = pops.iter().map(|x| (1.0 - epsilon) * x).collect();
    for (k, &pk) in pops.iter().enumerate() {
        member[k] += epsilon;
        divergence += pk * 0.5 * member.iter().zip(&pops).map(|(a, b)| (a - b).abs()).sum::<f64>();
        mean_entropy += pk * shannon_raw(&member);
        member[k] -= epsilon;
    }
    let chi = shannon_raw(&pops) - mean_entropy;
    Ok(GibbsMixtureWitness {
        dim,
        epsilon,
        gibbs_entropy: gibbs.entropy,
        divergence,
        chi,
        lower_bound: epsilon * gibbs.entropy - h2_raw(epsilon),
    })
}
