//! Finite-dimensional channels, the standard example families and
//! Chebyshev-radius capacity bounds.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divergence::{chebyshev_radius, SolverConfig};
use crate::entropy::{eta_raw, g_raw, h2_raw, shannon_raw};
use crate::error::{invalid, Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix};
use crate::sample::random_pure_state;
use crate::state::DensityMatrix;

/// Tolerance on `Σ K†K = I` and on orthonormality of measurement bases.
pub const TP_TOL: f64 = 1e-9;

/// Number of random pure probes used by [`default_probes`] callers that do
/// not specify one.
pub const DEFAULT_RANDOM_PROBES: usize = 200;

#[derive(Clone, Debug)]
pub enum ChannelKind {
    Kraus(Vec<CMatrix>),
    /// `ρ ↦ Σ_k ⟨φ_k|ρ|φ_k⟩ σ_k`, with `φ_k` the columns of `basis`.
    ClassicalQuantum {
        basis: CMatrix,
        outputs: Vec<DensityMatrix>,
    },
}

/// Spectra of the isomorphic output states of a classical-quantum channel
/// whose output set is their convex hull and contains `I/d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum SpectrumCase {
    /// `{1 − r/d, 1/d (r times), 0 (d − r − 1 times)}`, `r < d − 1`.
    ShiftedUniform { d: usize, r: usize },
    /// `{1/r (r times), 0 (d − r times)}`, `1 ≤ r ≤ d`.
    Projector { d: usize, r: usize },
}

impl SpectrumCase {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectrumCase::ShiftedUniform { d, r } => {
                if d < 2 || r + 1 >= d {
                    return Err(invalid(format!("shifted-uniform spectrum needs r < d − 1, got d={d}, r={r}")));
                }
            }
            SpectrumCase::Projector { d, r } => {
                if r == 0 || r > d {
                    return Err(invalid(format!("projector spectrum needs 1 ≤ r ≤ d, got d={d}, r={r}")));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match *self {
            SpectrumCase::ShiftedUniform { d, .. } | SpectrumCase::Projector { d, .. } => d,
        }
    }

    pub fn spectrum(&self) -> Vec<f64> {
        match *self {
            SpectrumCase::ShiftedUniform { d, r } => {
                let mut s = vec![0.0; d];
                s[0] = 1.0 - r as f64 / d as f64;
                for x in s.iter_mut().skip(1).take(r) {
                    *x = 1.0 / d as f64;
                }
                s
            }
            SpectrumCase::Projector { d, r } => {
                let mut s = vec![0.0; d];
                for x in s.iter_mut().take(r) {
                    *x = 1.0 / r as f64;
                }
                s
            }
        }
    }

    /// `½‖σ − I/d‖₁` for any output state `σ`.
    pub fn radius(&self) -> f64 {
        match *self {
            SpectrumCase::ShiftedUniform { d, r } => 1.0 - (r + 1) as f64 / d as f64,
            SpectrumCase::Projector { d, r } => 1.0 - r as f64 / d as f64,
        }
    }

    /// `log d − H(σ)`
    pub fn capacity(&self) -> f64 {
        match *self {
            SpectrumCase::ShiftedUniform { d, r } => {
                let q = 1.0 - r as f64 / d as f64;
                q * (d as f64).ln() - eta_raw(q)
            }
            SpectrumCase::Projector { d, r } => (d as f64).ln() - (r as f64).ln(),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            SpectrumCase::ShiftedUniform { d, r } => format!("cq-shifted-uniform(d={d}, r={r})"),
            SpectrumCase::Projector { d, r } => format!("cq-projector(d={d}, r={r})"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ChannelFamily {
    Identity { d: usize },
    /// `ρ ↦ (1−p)ρ + p I/d`
    Depolarizing { d: usize, p: f64 },
    /// `ρ ↦ (1−p)ρ ⊕ p Tr ρ` into dimension `d + 1`.
    Erasure { d: usize, p: f64 },
    /// `ρ ↦ (1−p)ρ + p σ`
    Mixing { sigma: DensityMatrix, p: f64 },
    /// Measure in `basis` (computational if `None`) and prepare `outputs[k]`.
    ClassicalQuantum {
        basis: Option<CMatrix>,
        outputs: Vec<DensityMatrix>,
    },
    /// Classical-quantum channel onto cyclic shifts of a diagonal spectrum.
    CqSpectrum(SpectrumCase),
}

impl ChannelFamily {
    pub fn name(&self) -> String {
        match self {
            ChannelFamily::Identity { d } => format!("identity(d={d})"),
            ChannelFamily::Depolarizing { d, p } => format!("depolarizing(d={d}, p={p})"),
            ChannelFamily::Erasure { d, p } => format!("erasure(d={d}, p={p})"),
            ChannelFamily::Mixing { sigma, p } => format!("mixing(d={}, p={p})", sigma.dim()),
            ChannelFamily::ClassicalQuantum { outputs, .. } => format!("cq(n={})", outputs.len()),
            ChannelFamily::CqSpectrum(case) => case.name(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kind: ChannelKind,
    input_dim: usize,
    output_dim: usize,
    family: Option<ChannelFamily>,
}

impl QuantumChannel {
    /// Channel from Kraus operators, all `d_B × d_A`, with `Σ K†K = I`.
    pub fn kraus(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops.first().ok_or_else(|| invalid("a channel needs at least one Kraus operator"))?;
        let (out, inp) = (first.rows(), first.cols());
        if out == 0 || inp == 0 {
            return Err(invalid("Kraus operators must be nonempty"));
        }
        let mut sum = CMatrix::zeros(inp, inp);
        for k in &ops {
            if k.rows() != out || k.cols() != inp {
                return Err(invalid(format!(
                    "Kraus operators must all be {out}×{inp}, got {}×{}",
                    k.rows(),
                    k.cols()
                )));
            }
            sum = sum.add(&k.adjoint().matmul(k)?)?;
        }
        let defect = sum.sub(&CMatrix::identity(inp))?.max_abs();
        if defect > TP_TOL {
            return Err(invalid(format!("Kraus operators are not trace preserving (defect {defect:.3e})")));
        }
        Ok(Self {
            kind: ChannelKind::Kraus(ops),
            input_dim: inp,
            output_dim: out,
            family: None,
        })
    }

    /// Classical-quantum channel; `basis` columns must be orthonormal.
    pub fn classical_quantum(basis: Option<CMatrix>, outputs: Vec<DensityMatrix>) -> Result<Self> {
        let first = outputs.first().ok_or_else(|| invalid("a cq channel needs at least one output state"))?;
        let out = first.dim();
        if let Some(s) = outputs.iter().find(|s| s.dim() != out) {
            return Err(Error::DimensionMismatch(out, s.dim()));
        }
        let n = outputs.len();
        let basis = basis.unwrap_or_else(|| CMatrix::identity(n));
        if basis.rows() != n || basis.cols() != n {
            return Err(invalid(format!(
                "measurement basis must be {n}×{n}, got {}×{}",
                basis.rows(),
                basis.cols()
            )));
        }
        let defect = basis.adjoint().matmul(&basis)?.sub(&CMatrix::identity(n))?.max_abs();
        if defect > TP_TOL {
            return Err(invalid(format!("measurement basis is not orthonormal (defect {defect:.3e})")));
        }
        Ok(Self {
            kind: ChannelKind::ClassicalQuantum { basis, outputs },
            input_dim: n,
            output_dim: out,
            family: None,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    pub fn family(&self) -> Option<&ChannelFamily> {
        self.family.as_ref()
    }

    fn tagged(mut self, family: ChannelFamily) -> Self {
        self.family = Some(family);
        self
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("channel parameter p must lie in [0,1], got {p}")));
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(invalid("channel dimension must be positive"));
    }
    Ok(())
}

/// `X^a Z^b` with `X|k⟩ = |k+1⟩` and `Z|k⟩ = ω^k|k⟩`.
fn generalized_pauli(d: usize, a: usize, b: usize) -> CMatrix {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d {
        m[((k + a) % d, k)] = Complex64::from_polar(1.0, omega * (b * k) as f64);
    }
    m
}

pub fn make_channel(family: ChannelFamily) -> Result<QuantumChannel> {
    let channel = match &family {
        ChannelFamily::Identity { d } => {
            check_dim(*d)?;
            QuantumChannel::kraus(vec![CMatrix::identity(*d)])?
        }
        ChannelFamily::Depolarizing { d, p } => {
            check_dim(*d)?;
            check_p(*p)?;
            let d2 = (d * d) as f64;
            let mut ops = Vec::with_capacity(d * d);
            for a in 0..*d {
                for b in 0..*d {
                    let w = if a == 0 && b == 0 { 1.0 - p + p / d2 } else { p / d2 };
                    ops.push(generalized_pauli(*d, a, b).scale(Complex64::new(w.sqrt(), 0.0)));
                }
            }
            QuantumChannel::kraus(ops)?
        }
        ChannelFamily::Erasure { d, p } => {
            check_dim(*d)?;
            check_p(*p)?;
            let keep = CMatrix::from_fn(d + 1, *d, |i, j| {
                Complex64::new(if i == j { (1.0 - p).sqrt() } else { 0.0 }, 0.0)
            });
            let mut ops = vec![keep];
            for k in 0..*d {
                let mut m = CMatrix::zeros(d + 1, *d);
                m[(*d, k)] = Complex64::new(p.sqrt(), 0.0);
                ops.push(m);
            }
            QuantumChannel::kraus(ops)?
        }
        ChannelFamily::Mixing { sigma, p } => {
            check_p(*p)?;
            let d = sigma.dim();
            let mut ops = vec![CMatrix::identity(d).scale(Complex64::new((1.0 - p).sqrt(), 0.0))];
            let spec = sigma.eig();
            for (j, &lam) in spec.eigenvalues.iter().enumerate() {
                if lam <= 0.0 {
                    continue;
                }
                let psi = spec.vector(j);
                let amp = (p * lam).sqrt();
                for k in 0..d {
                    let mut e = vec![Complex64::new(0.0, 0.0); d];
                    e[k] = Complex64::new(1.0, 0.0);
                    ops.push(CMatrix::outer(&psi, &e).scale(Complex64::new(amp, 0.0)));
                }
            }
            QuantumChannel::kraus(ops)?
        }
        ChannelFamily::ClassicalQuantum { basis, outputs } => {
            QuantumChannel::classical_quantum(basis.clone(), outputs.clone())?
        }
        ChannelFamily::CqSpectrum(case) => {
            case.validate()?;
            let d = case.dim();
            let spectrum = case.spectrum();
            let outputs = (0..d)
                .map(|k| {
                    let shifted: Vec<f64> = (0..d).map(|i| spectrum[(i + d - k) % d]).collect();
                    DensityMatrix::diagonal(&shifted)
                })
                .collect::<Result<Vec<_>>>()?;
            QuantumChannel::classical_quantum(None, outputs)?
        }
    };
    Ok(channel.tagged(family))
}

pub fn apply_channel(channel: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != channel.input_dim {
        return Err(Error::DimensionMismatch(channel.input_dim, rho.dim()));
    }
    let out = match &channel.kind {
        ChannelKind::Kraus(ops) => {
            let mut acc = HermitianMatrix::zeros(channel.output_dim);
            for k in ops {
                acc.add_scaled(1.0, &rho.congruence(k)?)?;
            }
            acc
        }
        ChannelKind::ClassicalQuantum { basis, outputs } => {
            let mut acc = HermitianMatrix::zeros(channel.output_dim);
            for (k, sigma) in outputs.iter().enumerate() {
                let w = rho.expectation(&basis.column(k));
                acc.add_scaled(w, sigma)?;
            }
            acc
        }
    };
    Ok(DensityMatrix::from_trusted(out))
}

/// The `d` computational basis states followed by `random` Haar-random pure
/// states drawn from `seed`.
pub fn default_probes(d: usize, random: usize, seed: u64) -> Vec<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut probes: Vec<DensityMatrix> = (0..d).map(|k| DensityMatrix::basis(d, k)).collect();
    probes.extend((0..random).map(|_| random_pure_state(d, &mut rng)));
    probes
}

/// Chebyshev radius of the images of `probes`; a lower estimate of the
/// radius of the whole output set.
pub fn output_chebyshev_radius(
    channel: &QuantumChannel,
    probes: &[DensityMatrix],
    cfg: &SolverConfig,
) -> Result<f64> {
    if probes.is_empty() {
        return Err(invalid("probe set is empty"));
    }
    let images = probes
        .iter()
        .map(|rho| apply_channel(channel, rho))
        .collect::<Result<Vec<_>>>()?;
    chebyshev_radius(&images, cfg)
}

/// Closed-form Holevo capacity (nats) for channels of a recognized family.
pub fn exact_capacity(channel: &QuantumChannel) -> Option<f64> {
    match channel.family.as_ref()? {
        ChannelFamily::Identity { d } => Some((*d as f64).ln()),
        ChannelFamily::Depolarizing { d, p } => {
            let c = 1.0 - 1.0 / *d as f64;
            let pc = p * c;
            let tail = if pc > 0.0 { pc * c.ln() } else { 0.0 };
            Some((1.0 - pc) * (*d as f64).ln() - h2_raw(pc) - tail)
        }
        ChannelFamily::Erasure { d, p } => Some((1.0 - p) * (*d as f64).ln()),
        ChannelFamily::CqSpectrum(case) => Some(case.capacity()),
        ChannelFamily::Mixing { .. } | ChannelFamily::ClassicalQuantum { .. } => None,
    }
}

/// Output Chebyshev radius in closed form for recognized families.
pub fn known_radius(channel: &QuantumChannel) -> Option<f64> {
    match channel.family.as_ref()? {
        ChannelFamily::Identity { d } => Some(1.0 - 1.0 / *d as f64),
        ChannelFamily::Depolarizing { d, p } | ChannelFamily::Erasure { d, p } => {
            Some((1.0 - p) * (1.0 - 1.0 / *d as f64))
        }
        ChannelFamily::CqSpectrum(case) => Some(case.radius()),
        ChannelFamily::Mixing { .. } | ChannelFamily::ClassicalQuantum { .. } => None,
    }
}

/// `r log d_B + g(r)`
pub fn prop2_bound(r_phi: f64, d_b: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&r_phi) {
        return Err(invalid(format!("Chebyshev radius must lie in [0,1], got {r_phi}")));
    }
    if d_b == 0 {
        return Err(invalid("output dimension must be positive"));
    }
    Ok(r_phi * (d_b as f64).ln() + g_raw(r_phi))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityBoundReport {
    pub family: String,
    pub r_phi: f64,
    pub bound: f64,
    pub exact: Option<f64>,
    /// Number of probe states when `r_phi` was estimated numerically.
    pub probes: Option<usize>,
}

/// Bound from a numerically estimated output radius, with the exact
/// capacity when the family has one.
pub fn capacity_report(
    channel: &QuantumChannel,
    probes: &[DensityMatrix],
    cfg: &SolverConfig,
) -> Result<CapacityBoundReport> {
    let r = output_chebyshev_radius(channel, probes, cfg)?.clamp(0.0, 1.0);
    Ok(CapacityBoundReport {
        family: channel
            .family
            .as_ref()
            .map(ChannelFamily::name)
            .unwrap_or_else(|| "custom".to_string()),
        r_phi: r,
        bound: prop2_bound(r, channel.output_dim)?,
        exact: exact_capacity(channel),
        probes: Some(probes.len()),
    })
}

/// Exact capacity and radius bound for the classical-quantum channels onto
/// isomorphic states, from the closed-form radius.
pub fn cq_capacity_bound_report(case: SpectrumCase) -> Result<CapacityBoundReport> {
    case.validate()?;
    let r = case.radius();
    Ok(CapacityBoundReport {
        family: case.name(),
        r_phi: r,
        bound: prop2_bound(r, case.dim())?,
        exact: Some(case.capacity()),
        probes: None,
    })
}

/// Entropy `H(σ)` of the common output spectrum.
pub fn min_output_entropy(case: SpectrumCase) -> f64 {
    shannon_raw(&case.spectrum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::make_pure_state_real;

    fn close(a: &DensityMatrix, b: &DensityMatrix) -> bool {
        a.sub(b).unwrap().max_abs() < 1e-12
    }

    #[test]
    fn depolarizing_zero_is_identity_and_one_is_constant() {
        let rho = make_pure_state_real(&[0.6, 0.8]).unwrap();
        let id = make_channel(ChannelFamily::Depolarizing { d: 2, p: 0.0 }).unwrap();
        assert!(close(&apply_channel(&id, &rho).unwrap(), &rho));
        let full = make_channel(ChannelFamily::Depolarizing { d: 2, p: 1.0 }).unwrap();
        assert!(close(&apply_channel(&full, &rho).unwrap(), &DensityMatrix::chaotic(2)));
    }

    #[test]
    fn erasure_block_form() {
        let rho = make_pure_state_real(&[1.0, 1.0, 0.0]).unwrap();
        let ch = make_channel(ChannelFamily::Erasure { d: 3, p: 0.25 }).unwrap();
        let out = apply_channel(&ch, &rho).unwrap();
        assert_eq!(out.dim(), 4);
        for i in 0..3 {
            for j in 0..3 {
                assert!((out.get(i, j) - rho.get(i, j) * 0.75).norm() < 1e-12);
            }
            assert!(out.get(i, 3).norm() < 1e-12);
        }
        assert!((out.get(3, 3).re - 0.25).abs() < 1e-12);
        let all = make_channel(ChannelFamily::Erasure { d: 3, p: 1.0 }).unwrap();
        assert!(close(&apply_channel(&all, &rho).unwrap(), &DensityMatrix::basis(4, 3)));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_channel(ChannelFamily::Depolarizing { d: 2, p: 1.5 }).is_err());
        assert!(make_channel(ChannelFamily::Erasure { d: 0, p: 0.5 }).is_err());
        assert!(make_channel(ChannelFamily::CqSpectrum(SpectrumCase::ShiftedUniform { d: 4, r: 3 })).is_err());
        assert!(QuantumChannel::kraus(vec![CMatrix::identity(2).scale(Complex64::new(0.5, 0.0))]).is_err());
        assert!(prop2_bound(1.2, 2).is_err());
        let ch = make_channel(ChannelFamily::Identity { d: 2 }).unwrap();
        assert!(apply_channel(&ch, &DensityMatrix::chaotic(3)).is_err());
    }

    #[test]
    fn closed_form_capacities() {
        let dep = make_channel(ChannelFamily::Depolarizing { d: 3, p: 0.5 }).unwrap();
        let expected = (1.0 - 0.5 * (2.0 / 3.0)) * 3f64.ln() - h2_raw(1.0 / 3.0) - (1.0 / 3.0) * (2f64 / 3.0).ln();
        assert!((exact_capacity(&dep).unwrap() - expected).abs() < 1e-12);
        let era = make_channel(ChannelFamily::Erasure { d: 4, p: 0.25 }).unwrap();
        assert!((exact_capacity(&era).unwrap() - 0.75 * 4f64.ln()).abs() < 1e-12);
        let id = make_channel(ChannelFamily::Identity { d: 5 }).unwrap();
        assert!((exact_capacity(&id).unwrap() - 5f64.ln()).abs() < 1e-12);
        assert!(prop2_bound(0.0, 7).unwrap().abs() < 1e-15);
    }

    #[test]
    fn cq_spectrum_outputs_average_to_chaotic() {
        for case in [
            SpectrumCase::ShiftedUniform { d: 6, r: 2 },
            SpectrumCase::Projector { d: 6, r: 3 },
        ] {
            let ch = make_channel(ChannelFamily::CqSpectrum(case)).unwrap();
            let out = apply_channel(&ch, &DensityMatrix::chaotic(6)).unwrap();
            assert!(close(&out, &DensityMatrix::chaotic(6)));
            let h = min_output_entropy(case);
            assert!((exact_capacity(&ch).unwrap() - (6f64.ln() - h)).abs() < 1e-12);
        }
        let trivial = cq_capacity_bound_report(SpectrumCase::Projector { d: 5, r: 5 }).unwrap();
        assert!(trivial.exact.unwrap().abs() < 1e-15);
    }
}
