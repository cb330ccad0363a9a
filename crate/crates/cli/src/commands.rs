//! Subcommand implementations. Each returns the rendered report.

use holevo::bounds::bound_report;
use holevo::channel::{
    capacity_report, default_probes, exact_capacity, known_radius, make_channel, prop2_bound, CapacityBoundReport,
    QuantumChannel,
};
use holevo::divergence::{amd_optimal, mmd_optimal};
use holevo::energy::{corollary6_bound, gibbs_entropy, hat_f, prop3_bound, prop4_oscillator_bound, TMinimum};
use holevo::ensemble::max_pairwise_distance;
use holevo::{average_state, holevo_chi, metric_divergence, DiscreteEnsemble, DivergenceSolution, SolverConfig};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::golden::{run_golden, GoldenCheck};
use crate::output::{matrix_json, num, Style, Table};
use crate::problem::{channel_family, EnergyProblem, Kind, Problem, ProblemFile};

pub fn expect_ensemble(file: &ProblemFile) -> Result<&DiscreteEnsemble> {
    match &file.problem {
        Problem::Ensemble(e) => Ok(e),
        _ => Err(wrong_kind(Kind::Ensemble, file.kind())),
    }
}

fn wrong_kind(want: Kind, got: Kind) -> CliError {
    CliError::Invalid {
        field: "kind".into(),
        msg: format!("this command needs {} problem, got {}", kind_name(want), kind_name(got)),
    }
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Ensemble => "an ensemble",
        Kind::Channel => "a channel",
        Kind::Energy => "an energy",
    }
}

fn spectrum(e: &DiscreteEnsemble) -> Vec<f64> {
    average_state(e).eigenvalues()
}

pub fn chi(e: &DiscreteEnsemble, style: &Style) -> String {
    let chi = holevo_chi(e);
    let spec = spectrum(e);
    style.render(
        || {
            let mut t = Table::new(["quantity", "value"]);
            t.row([format!("chi ({})", style.unit()), num(style.ent(chi))]);
            for (k, x) in spec.iter().enumerate() {
                t.row([format!("average eigenvalue {}", k + 1), num(*x)]);
            }
            t.render()
        },
        || {
            json!({
                "base": style.base_name(),
                "chi": style.ent(chi),
                "average_spectrum": spec,
            })
        },
    )
}

pub fn bounds(e: &DiscreteEnsemble, cfg: &SolverConfig, style: &Style) -> Result<String> {
    let amd = amd_optimal(e, cfg)?;
    let mmd = mmd_optimal(e.states(), cfg)?;
    let report = bound_report(e, &amd, &mmd)?;
    let avg = metric_divergence(e, &average_state(e))?;
    let upsilon = max_pairwise_distance(e);
    let divergences = [("average", avg), ("amd", amd.value), ("mmd", mmd.value), ("upsilon_m", upsilon)];
    Ok(style.render(
        || {
            let mut t = Table::new(["quantity", "value"]);
            t.row([format!("chi ({})", style.unit()), num(style.ent(report.chi_exact))]);
            for (name, v) in divergences {
                t.row([format!("divergence {name}"), num(v)]);
            }
            let mut out = t.render();
            out.push('\n');
            let mut b = Table::new(["bound", "reference", &format!("value ({})", style.unit())]);
            for entry in &report.entries {
                b.row([entry.name.clone(), entry.reference.clone(), num(style.ent(entry.value))]);
            }
            out.push_str(&b.render());
            if let Some(best) = report.best() {
                out.push_str(&format!(
                    "\nbest: {} at {} = {}\n",
                    best.name,
                    best.reference,
                    num(style.ent(best.value))
                ));
            }
            out
        },
        || {
            let mut by_ref: Map<String, Value> = Map::new();
            for entry in &report.entries {
                by_ref
                    .entry(entry.reference.clone())
                    .or_insert_with(|| Value::Object(Map::new()))
                    .as_object_mut()
                    .expect("object")
                    .insert(entry.name.clone(), json!(style.ent(entry.value)));
            }
            let divergences: Map<String, Value> = divergences.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            json!({
                "base": style.base_name(),
                "chi": style.ent(report.chi_exact),
                "divergences": divergences,
                "bounds": by_ref,
                "best": report.best().map(|b| json!({
                    "name": b.name,
                    "reference": b.reference,
                    "value": style.ent(b.value),
                })),
            })
        },
    ))
}

/// A divergence solution; the values are trace distances and are never
/// rescaled by the log base.
pub fn solution(label: &str, sol: &DivergenceSolution, style: &Style) -> String {
    let spec: Vec<f64> = sol.optimal_state.eigenvalues().iter().map(|x| x.max(0.0)).collect();
    style.render(
        || {
            let mut t = Table::new(["quantity", "value"]);
            t.row([label.to_string(), num(sol.value)]);
            t.row(["iterations".to_string(), sol.iterations.to_string()]);
            t.row(["certified gap".to_string(), num(sol.certified_gap)]);
            for (k, x) in spec.iter().enumerate() {
                t.row([format!("state eigenvalue {}", k + 1), num(*x)]);
            }
            t.render()
        },
        || {
            json!({
                "problem": label,
                "value": sol.value,
                "iterations": sol.iterations,
                "certified_gap": sol.certified_gap,
                "optimal_state": matrix_json(&sol.optimal_state),
                "state_spectrum": spec,
            })
        },
    )
}

pub fn amd(e: &DiscreteEnsemble, cfg: &SolverConfig, style: &Style) -> Result<String> {
    Ok(solution("amd", &amd_optimal(e, cfg)?, style))
}

pub fn mmd(e: &DiscreteEnsemble, cfg: &SolverConfig, style: &Style) -> Result<String> {
    Ok(solution("mmd", &mmd_optimal(e.states(), cfg)?, style))
}

/// Where `capacity` gets its channel from.
pub enum ChannelSource<'a> {
    File(&'a ProblemFile),
    Family {
        name: &'a str,
        d: Option<usize>,
        p: Option<f64>,
        r: Option<usize>,
    },
}

pub struct CapacityOptions {
    /// Estimate the radius from probes even when a closed form exists.
    pub estimate: bool,
    /// Random pure probes added to the basis states.
    pub probes: usize,
}

pub const DEFAULT_PROBES: usize = 40;

pub fn resolve_channel(source: ChannelSource<'_>) -> Result<QuantumChannel> {
    match source {
        ChannelSource::File(file) => match &file.problem {
            Problem::Channel(ch) => Ok(ch.clone()),
            _ => Err(wrong_kind(Kind::Channel, file.kind())),
        },
        ChannelSource::Family { name, d, p, r } => Ok(make_channel(channel_family(name, d, p, r)?)?),
    }
}

pub fn capacity_bound(ch: &QuantumChannel, opts: &CapacityOptions, cfg: &SolverConfig) -> Result<CapacityBoundReport> {
    match known_radius(ch) {
        Some(r) if !opts.estimate => Ok(CapacityBoundReport {
            family: ch.family().map(|f| f.name()).unwrap_or_default(),
            r_phi: r,
            bound: prop2_bound(r, ch.output_dim())?,
            exact: exact_capacity(ch),
            probes: None,
        }),
        _ => Ok(capacity_report(ch, &default_probes(ch.input_dim(), opts.probes, cfg.seed), cfg)?),
    }
}

pub fn capacity(ch: &QuantumChannel, opts: &CapacityOptions, cfg: &SolverConfig, style: &Style) -> Result<String> {
    let rep = capacity_bound(ch, opts, cfg)?;
    let radius = if rep.probes.is_some() { "estimated" } else { "closed form" };
    Ok(style.render(
        || {
            let mut t = Table::new(["quantity", "value"]);
            t.row(["channel".to_string(), rep.family.clone()]);
            t.row([format!("radius ({radius})"), num(rep.r_phi)]);
            if let Some(n) = rep.probes {
                t.row(["probes".to_string(), n.to_string()]);
            }
            t.row([format!("bound ({})", style.unit()), num(style.ent(rep.bound))]);
            if let Some(x) = rep.exact {
                t.row([format!("exact ({})", style.unit()), num(style.ent(x))]);
                t.row([format!("gap ({})", style.unit()), num(style.ent(rep.bound - x))]);
            }
            t.render()
        },
        || {
            json!({
                "base": style.base_name(),
                "family": rep.family,
                "input_dim": ch.input_dim(),
                "output_dim": ch.output_dim(),
                "r_phi": rep.r_phi,
                "radius_source": radius,
                "probes": rep.probes,
                "bound": style.ent(rep.bound),
                "exact": rep.exact.map(|x| style.ent(x)),
            })
        },
    ))
}

pub fn expect_energy(file: &ProblemFile) -> Result<&EnergyProblem> {
    match &file.problem {
        Problem::Energy(p) => Ok(p),
        _ => Err(wrong_kind(Kind::Energy, file.kind())),
    }
}

pub fn energy_bound(p: &EnergyProblem, style: &Style) -> Result<String> {
    let input = &p.input;
    let f_h = gibbs_entropy(&p.spec, input.avg_energy)?.entropy;
    let f_hat = hat_f(&p.spec, input.avg_energy)?;
    let majorant = prop3_bound(input, |e| hat_f(&p.spec, e).unwrap_or(f64::INFINITY))?;
    let relaxed = corollary6_bound(&p.spec, input)?;
    let channel = prop4_oscillator_bound(&p.spec, input.epsilon, input.avg_energy, input.sigma_energy)?;
    let rows: [(&str, TMinimum); 3] = [
        ("majorant-bound", majorant),
        ("log-relaxed-bound", relaxed),
        ("channel-capacity-bound", channel),
    ];
    Ok(style.render(
        || {
            let mut t = Table::new(["quantity", "value", "t"]);
            t.row(["kappa".to_string(), num(input.kappa()), String::new()]);
            t.row([format!("F_H ({})", style.unit()), num(style.ent(f_h)), String::new()]);
            t.row([format!("F_hat ({})", style.unit()), num(style.ent(f_hat)), String::new()]);
            for (name, m) in &rows {
                let flag = if m.at_boundary { " (boundary)" } else { "" };
                t.row([format!("{name} ({})", style.unit()), num(style.ent(m.value)), format!("{}{flag}", num(m.t))]);
            }
            t.render()
        },
        || {
            let bounds: Map<String, Value> = rows
                .iter()
                .map(|(name, m)| {
                    (
                        name.to_string(),
                        json!({"value": style.ent(m.value), "t": m.t, "at_boundary": m.at_boundary}),
                    )
                })
                .collect();
            json!({
                "base": style.base_name(),
                "modes": p.spec.modes(),
                "epsilon": input.epsilon,
                "avg_energy": input.avg_energy,
                "sigma_energy": input.sigma_energy,
                "kappa": input.kappa(),
                "gibbs_entropy": style.ent(f_h),
                "hat_f": style.ent(f_hat),
                "bounds": bounds,
            })
        },
    ))
}

/// Renders the golden checks; fails when any check fails.
pub fn reproduce_examples(cfg: &SolverConfig, style: &Style) -> Result<(String, Vec<GoldenCheck>)> {
    let checks = run_golden(cfg)?;
    let shown = |c: &GoldenCheck, x: f64| if c.entropic { style.ent(x) } else { x };
    let out = style.render(
        || {
            let mut t = Table::new(["item", "check", "expected", "computed", "status"]);
            for c in &checks {
                t.row([
                    c.item.clone(),
                    c.check.clone(),
                    format!("{} {}", c.relation.symbol(), num(shown(c, c.expected))),
                    num(shown(c, c.computed)),
                    if c.passed { "PASS" } else { "FAIL" }.to_string(),
                ]);
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            format!(
                "{}\n{passed}/{} checks passed (entropies in {})\n",
                t.render(),
                checks.len(),
                style.unit()
            )
        },
        || {
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "item": c.item,
                        "check": c.check,
                        "relation": c.relation,
                        "expected": shown(c, c.expected),
                        "computed": shown(c, c.computed),
                        "tolerance": shown(c, c.tolerance),
                        "entropic": c.entropic,
                        "passed": c.passed,
                    })
                })
                .collect();
            json!({"base": style.base_name(), "checks": rows})
        },
    );
    Ok((out, checks))
}
