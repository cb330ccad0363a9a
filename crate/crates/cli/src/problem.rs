//! Problem files: a JSON envelope `{schema_version, kind, payload}` holding an
//! ensemble, a channel or an oscillator energy problem.
//!
//! Complex numbers are `[re, im]` pairs, kets are arrays of them and matrices
//! are arrays of rows.

use std::path::Path;

use holevo::channel::{make_channel, ChannelFamily, QuantumChannel, SpectrumCase};
use holevo::energy::{EnergyBoundInput, OscillatorSpec};
use holevo::state::make_pure_state;
use holevo::{CMatrix, DensityMatrix, DiscreteEnsemble, HermitianMatrix};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::value::RawValue;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Probability sums within this distance of 1 are accepted as they are.
pub const PROB_ACCEPT_TOL: f64 = 1e-6;
/// Sums within this distance are renormalized with a warning; beyond it the
/// file is rejected.
pub const PROB_RENORMALIZE_TOL: f64 = 1e-3;

type Pair = [f64; 2];

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<'a> {
    schema_version: String,
    kind: Kind,
    #[serde(borrow)]
    payload: &'a RawValue,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ensemble,
    Channel,
    Energy,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsemblePayload {
    dim: usize,
    probs: Vec<f64>,
    states: Vec<StateSpec>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum StateSpec {
    Ket(Vec<Pair>),
    Matrix(Vec<Vec<Pair>>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelPayload {
    family: Option<String>,
    #[serde(default)]
    params: FamilyParams,
    kraus: Option<Vec<Vec<Vec<Pair>>>>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyParams {
    d: Option<usize>,
    p: Option<f64>,
    r: Option<usize>,
    sigma: Option<StateSpec>,
    basis: Option<Vec<Vec<Pair>>>,
    outputs: Option<Vec<StateSpec>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnergyPayload {
    modes: usize,
    hbar_omega: Vec<f64>,
    epsilon: f64,
    avg_energy: f64,
    sigma_energy: f64,
}

#[derive(Clone, Debug)]
pub struct EnergyProblem {
    pub spec: OscillatorSpec,
    pub input: EnergyBoundInput,
}

#[derive(Clone, Debug)]
pub enum Problem {
    Ensemble(DiscreteEnsemble),
    Channel(QuantumChannel),
    Energy(EnergyProblem),
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub schema_version: String,
    pub problem: Problem,
    /// Non-fatal adjustments made while loading, such as renormalization.
    pub warnings: Vec<String>,
}

impl ProblemFile {
    pub fn kind(&self) -> Kind {
        match self.problem {
            Problem::Ensemble(_) => Kind::Ensemble,
            Problem::Channel(_) => Kind::Channel,
            Problem::Energy(_) => Kind::Energy,
        }
    }
}

pub fn parse_problem(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_problem_str(&text)
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| json_error(&e, 0, 0))?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(invalid(
            "schema_version",
            format!("unsupported schema version {:?}, expected {SCHEMA_VERSION:?}", env.schema_version),
        ));
    }
    let raw = env.payload.get();
    let (line, col) = position_of(text, raw);
    let mut warnings = Vec::new();
    let problem = match env.kind {
        Kind::Ensemble => {
            let p: EnsemblePayload = serde_json::from_str(raw).map_err(|e| json_error(&e, line, col))?;
            Problem::Ensemble(build_ensemble(p, &mut warnings)?)
        }
        Kind::Channel => {
            let p: ChannelPayload = serde_json::from_str(raw).map_err(|e| json_error(&e, line, col))?;
            Problem::Channel(build_channel(p)?)
        }
        Kind::Energy => {
            let p: EnergyPayload = serde_json::from_str(raw).map_err(|e| json_error(&e, line, col))?;
            Problem::Energy(build_energy(p)?)
        }
    };
    Ok(ProblemFile {
        schema_version: env.schema_version,
        problem,
        warnings,
    })
}

/// Line and column (1-based) where the borrowed `inner` starts within `outer`.
fn position_of(outer: &str, inner: &str) -> (usize, usize) {
    let offset = (inner.as_ptr() as usize).saturating_sub(outer.as_ptr() as usize).min(outer.len());
    let before = &outer[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, col)
}

/// Shifts a payload-relative error position to file coordinates.
fn json_error(e: &serde_json::Error, line0: usize, col0: usize) -> CliError {
    let (line, column) = match (e.line(), line0) {
        (l, 0) => (l, e.column()),
        (1, l0) => (l0, col0 + e.column() - 1),
        (l, l0) => (l0 + l - 1, e.column()),
    };
    let msg = e.to_string();
    let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
    CliError::Json { line, column, msg }
}

fn invalid(field: impl Into<String>, msg: impl Into<String>) -> CliError {
    CliError::Invalid {
        field: field.into(),
        msg: msg.into(),
    }
}

fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn build_matrix(rows: &[Vec<Pair>], field: &str) -> Result<CMatrix> {
    let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(complex).collect()).collect();
    CMatrix::from_rows(&rows).map_err(|e| invalid(field, e.to_string()))
}

fn build_state(spec: &StateSpec, dim: Option<usize>, field: &str) -> Result<DensityMatrix> {
    let state = match spec {
        StateSpec::Ket(amps) => {
            let v: Vec<Complex64> = amps.iter().map(complex).collect();
            make_pure_state(&v).map_err(|e| invalid(field, e.to_string()))?
        }
        StateSpec::Matrix(rows) => {
            let m = build_matrix(rows, field)?;
            let h = HermitianMatrix::new(m).map_err(|e| invalid(field, e.to_string()))?;
            DensityMatrix::new(h).map_err(|e| invalid(field, e.to_string()))?
        }
    };
    if let Some(d) = dim {
        if state.dim() != d {
            return Err(invalid(field, format!("state has dimension {}, expected {d}", state.dim())));
        }
    }
    Ok(state)
}

/// Applies the probability tolerance policy, returning the vector to use.
pub fn check_probabilities(probs: &[f64], warnings: &mut Vec<String>) -> Result<Vec<f64>> {
    if probs.is_empty() {
        return Err(invalid("payload.probs", "at least one probability is required"));
    }
    if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| !(**p >= 0.0) || !p.is_finite()) {
        return Err(invalid(format!("payload.probs[{i}]"), format!("probability must be nonnegative, got {p}")));
    }
    let sum: f64 = probs.iter().sum();
    let dev = (sum - 1.0).abs();
    if dev > PROB_RENORMALIZE_TOL {
        return Err(invalid(
            "payload.probs",
            format!("probabilities sum to {sum}, more than {PROB_RENORMALIZE_TOL} away from 1"),
        ));
    }
    if dev > PROB_ACCEPT_TOL {
        warnings.push(format!("payload.probs: probabilities sum to {sum}; renormalized"));
    }
    Ok(probs.iter().map(|p| p / sum).collect())
}

fn build_ensemble(p: EnsemblePayload, warnings: &mut Vec<String>) -> Result<DiscreteEnsemble> {
    if p.dim == 0 {
        return Err(invalid("payload.dim", "dimension must be positive"));
    }
    if p.probs.len() != p.states.len() {
        return Err(invalid(
            "payload.probs",
            format!("{} probabilities for {} states", p.probs.len(), p.states.len()),
        ));
    }
    let probs = check_probabilities(&p.probs, warnings)?;
    let states = p
        .states
        .iter()
        .enumerate()
        .map(|(i, s)| build_state(s, Some(p.dim), &format!("payload.states[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    DiscreteEnsemble::new(probs, states).map_err(|e| invalid("payload", e.to_string()))
}

fn require<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| invalid(format!("payload.params.{field}"), "missing"))
}

/// Maps a family name and its parameters to a [`ChannelFamily`].
pub fn channel_family(name: &str, d: Option<usize>, p: Option<f64>, r: Option<usize>) -> Result<ChannelFamily> {
    Ok(match name {
        "identity" => ChannelFamily::Identity { d: require(d, "d")? },
        "depolarizing" => ChannelFamily::Depolarizing {
            d: require(d, "d")?,
            p: require(p, "p")?,
        },
        "erasure" => ChannelFamily::Erasure {
            d: require(d, "d")?,
            p: require(p, "p")?,
        },
        "cq-projector" => ChannelFamily::CqSpectrum(SpectrumCase::Projector {
            d: require(d, "d")?,
            r: require(r, "r")?,
        }),
        "cq-shifted-uniform" => ChannelFamily::CqSpectrum(SpectrumCase::ShiftedUniform {
            d: require(d, "d")?,
            r: require(r, "r")?,
        }),
        other => return Err(invalid("payload.family", format!("unknown channel family {other:?}"))),
    })
}

fn build_channel(p: ChannelPayload) -> Result<QuantumChannel> {
    let channel = match (p.family.as_deref(), p.kraus) {
        (Some(_), Some(_)) => return Err(invalid("payload", "give either a family or Kraus operators, not both")),
        (None, None) => return Err(invalid("payload", "missing family or kraus")),
        (None, Some(ops)) => {
            let ops = ops
                .iter()
                .enumerate()
                .map(|(i, m)| build_matrix(m, &format!("payload.kraus[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            QuantumChannel::kraus(ops)
        }
        (Some("mixing"), None) => {
            let sigma = build_state(&require(p.params.sigma, "sigma")?, None, "payload.params.sigma")?;
            make_channel(ChannelFamily::Mixing {
                sigma,
                p: require(p.params.p, "p")?,
            })
        }
        (Some("cq"), None) => {
            let outputs = require(p.params.outputs, "outputs")?;
            let outputs = outputs
                .iter()
                .enumerate()
                .map(|(i, s)| build_state(s, None, &format!("payload.params.outputs[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            let basis = p
                .params
                .basis
                .as_deref()
                .map(|rows| build_matrix(rows, "payload.params.basis"))
                .transpose()?;
            make_channel(ChannelFamily::ClassicalQuantum { basis, outputs })
        }
        (Some(name), None) => make_channel(channel_family(name, p.params.d, p.params.p, p.params.r)?),
    };
    channel.map_err(|e| invalid("payload", e.to_string()))
}

fn build_energy(p: EnergyPayload) -> Result<EnergyProblem> {
    if p.modes != p.hbar_omega.len() {
        return Err(invalid(
            "payload.hbar_omega",
            format!("{} frequencies for {} modes", p.hbar_omega.len(), p.modes),
        ));
    }
    let spec = OscillatorSpec::new(p.hbar_omega).map_err(|e| invalid("payload.hbar_omega", e.to_string()))?;
    let input = EnergyBoundInput::new(p.epsilon, p.avg_energy, p.sigma_energy)
        .and_then(|input| input.validate_for(&spec).map(|_| input))
        .map_err(|e| invalid("payload", e.to_string()))?;
    Ok(EnergyProblem { spec, input })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ensemble_file(probs: &str, states: &str) -> String {
        format!(
            r#"{{"schema_version": "1", "kind": "ensemble",
  "payload": {{"dim": 2, "probs": {probs}, "states": {states}}}}}"#
        )
    }

    const TWO_KETS: &str = r#"[{"ket": [[1,0],[0,0]]}, {"ket": [[0,0],[1,0]]}]"#;

    #[test]
    fn ensemble_round_trip() {
        let file = parse_problem_str(&ensemble_file("[0.25, 0.75]", TWO_KETS)).unwrap();
        assert_eq!(file.kind(), Kind::Ensemble);
        assert!(file.warnings.is_empty());
        let Problem::Ensemble(e) = file.problem else { panic!() };
        assert_eq!(e.probs(), &[0.25, 0.75]);
    }

    #[test]
    fn probability_policy() {
        let ok = parse_problem_str(&ensemble_file("[0.5, 0.5000005]", TWO_KETS)).unwrap();
        assert!(ok.warnings.is_empty());
        let warned = parse_problem_str(&ensemble_file("[0.5, 0.5005]", TWO_KETS)).unwrap();
        assert_eq!(warned.warnings.len(), 1);
        let Problem::Ensemble(e) = warned.problem else { panic!() };
        assert!((e.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        let err = parse_problem_str(&ensemble_file("[0.5, 0.51]", TWO_KETS)).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("payload.probs"));
    }

    #[test]
    fn non_psd_state_is_rejected_with_field() {
        let states = r#"[{"matrix": [[[1.001,0],[0,0]],[[0,0],[-0.001,0]]]}, {"ket": [[1,0],[0,0]]}]"#;
        let err = parse_problem_str(&ensemble_file("[0.5, 0.5]", states)).unwrap_err();
        assert!(err.to_string().starts_with("payload.states[0]"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_file_positions() {
        let text = "{\"schema_version\": \"1\", \"kind\": \"ensemble\",\n  \"payload\": {\"dim\": 2,\n  \"probs\": [0.5, 0.5], \"states\": 3}}";
        match parse_problem_str(text).unwrap_err() {
            CliError::Json { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn channel_and_energy_payloads() {
        let dep = r#"{"schema_version": "1", "kind": "channel", "payload": {"family": "depolarizing", "params": {"d": 3, "p": 0.5}}}"#;
        let Problem::Channel(ch) = parse_problem_str(dep).unwrap().problem else { panic!() };
        assert_eq!(ch.output_dim(), 3);

        let kraus = r#"{"schema_version": "1", "kind": "channel", "payload": {"kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}}"#;
        assert!(matches!(parse_problem_str(kraus).unwrap().problem, Problem::Channel(_)));

        let energy = r#"{"schema_version": "1", "kind": "energy", "payload": {"modes": 1, "hbar_omega": [1.0], "epsilon": 0.1, "avg_energy": 100.0, "sigma_energy": 0.5}}"#;
        assert!(matches!(parse_problem_str(energy).unwrap().problem, Problem::Energy(_)));

        let bad = r#"{"schema_version": "2", "kind": "energy", "payload": {}}"#;
        assert!(parse_problem_str(bad).unwrap_err().to_string().starts_with("schema_version"));
    }
}
