//! The subcommands. Each returns the text for stdout plus an optional
//! failure that decides the exit code after the text is written.

use std::path::Path;

use channellab_core::dilation::{cross_validate, validate_conserved, ConservationReport};
use channellab_core::lyapunov::{cesaro_checkpoints, orbit as run_orbit, orbit_oracle, Functional, OracleVerdict};
use channellab_core::spectral::{analyze_channel, purely_ergodic_shortcut, ShortcutOutcome};
use channellab_core::{zoo, KrausChannel, SpectralReport, Verdict};
use serde_json::{json, Map, Value};

use crate::doc::{parse_state, read_json, ChannelDoc, DilationDoc};
use crate::error::{CliError, CliResult};
use crate::json::{complex, complexes, matrix, num, state, to_line, ReportEnvelope};

#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub failure: Option<CliError>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: None }
    }

    fn envelope(env: &ReportEnvelope) -> Self {
        Output::ok(to_line(env))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub n_max: usize,
    pub tol: f64,
    pub seed: u64,
}

fn load_channel(path: &Path) -> CliResult<(Value, KrausChannel)> {
    let value = read_json(path)?;
    let channel = ChannelDoc::from_value(&value)?.to_channel()?;
    Ok((value, channel))
}

pub fn validate(path: &Path) -> CliResult<Output> {
    let value = read_json(path)?;
    let channel = ChannelDoc::from_value(&value)?.to_unvalidated()?;
    let r = channel.validate_cpt()?;
    let report = json!({
        "dim": channel.dim(),
        "kraus_rank": channel.kraus_ops().len(),
        "completeness_defect": num(r.completeness_defect),
        "min_choi_eigenvalue": num(r.min_choi_eigenvalue),
        "trace_preserving": r.trace_preserving,
        "completely_positive": r.completely_positive,
        "passed": r.passed(),
    });
    let mut out = Output::envelope(&ReportEnvelope::new("validate", &value, report, Vec::new()));
    if !r.passed() {
        out.failure = Some(CliError::Validation(format!(
            "validation failed: completeness defect {:e}, minimum Choi eigenvalue {:e}",
            r.completeness_defect, r.min_choi_eigenvalue
        )));
    }
    Ok(out)
}

pub fn spectral_json(r: &SpectralReport) -> Value {
    json!({
        "spectrum": complexes(&r.spectrum),
        "peripheral": complexes(&r.peripheral),
        "kappa": num(r.kappa),
        "verdict": r.verdict.as_str(),
        "fixed_points": r.fixed_points.iter().map(state).collect::<Vec<_>>(),
        "purity": r.fixed_point_purity.map_or(Value::Null, num),
        "eigenvalue_one_multiplicity": r.eigenvalue_one_multiplicity,
        "fixed_point_candidates": r.fixed_point_candidates.iter().map(matrix).collect::<Vec<_>>(),
        "eigen_residual": num(r.eigen_residual),
    })
}

pub fn classify(path: &Path, oracle: Option<OracleOptions>) -> CliResult<Output> {
    let (value, channel) = load_channel(path)?;
    let r = analyze_channel(&channel)?;
    let mut warnings = Vec::new();
    if r.near_degenerate_one {
        warnings.push("an eigenvalue lies just outside the eigenvalue-1 cluster; multiplicity is fragile".to_string());
    }
    let shortcut = purely_ergodic_shortcut(&r);
    if shortcut == ShortcutOutcome::Inconsistent {
        warnings.push("ergodic with a pure fixed point but not classified mixing: numerical trouble".to_string());
    }
    let mut report = spectral_json(&r);
    report["pure_fixed_point_shortcut"] = json!(match shortcut {
        ShortcutOutcome::Silent => "silent",
        ShortcutOutcome::ConfirmsMixing => "confirms_mixing",
        ShortcutOutcome::Inconsistent => "inconsistent",
    });
    if let Some(opts) = oracle {
        let o = orbit_oracle(&channel, opts.n_max, opts.tol, opts.seed)?;
        let agrees = (o.verdict == OracleVerdict::Mixing) == (r.verdict == Verdict::Mixing);
        if !agrees {
            warnings.push(format!("orbit oracle says {}, spectrum says {}", o.verdict.as_str(), r.verdict));
        }
        report["oracle"] = json!({
            "verdict": o.verdict.as_str(),
            "n_max": opts.n_max,
            "tol": num(opts.tol),
            "seed": opts.seed,
            "final_spread": num(o.final_spread),
            "tail_spread": num(o.tail_spread),
            "agrees": agrees,
        });
    }
    Ok(Output::envelope(&ReportEnvelope::new("classify", &value, report, warnings)))
}

/// One JSON line per step.
pub fn orbit(path: &Path, state_spec: &str, n: usize, functionals: &[Functional]) -> CliResult<Output> {
    let (_, channel) = load_channel(path)?;
    let rho0 = parse_state(state_spec, channel.dim())?;
    let trace = run_orbit(&channel, &rho0, n, functionals)?;
    let mut text = String::new();
    for k in 0..=n {
        let mut line = Map::new();
        line.insert("n".into(), json!(k));
        line.insert("distance".into(), trace.distances.as_ref().map_or(Value::Null, |d| num(d[k])));
        for (f, values) in &trace.functional_values {
            line.insert(f.name().into(), num(values[k]));
        }
        text.push_str(&to_line(&line));
        text.push('\n');
    }
    text.pop();
    Ok(Output::ok(text))
}

fn conservation_json(r: &ConservationReport) -> Value {
    json!({
        "commutator_norm": num(r.commutator_norm),
        "bath_residual": num(r.bath_residual),
        "extremal_offset": num(r.extremal_offset),
        "extremal_gap": num(r.extremal_gap),
        "failures": r.failures,
        "passed": r.passed(),
    })
}

pub fn dilation(path: &Path) -> CliResult<Output> {
    let value = read_json(path)?;
    let cd = DilationDoc::from_value(&value)?.to_dilation()?;
    let check = validate_conserved(&cd)?;
    if !check.passed() {
        let report = json!({ "conservation": conservation_json(&check) });
        let mut out = Output::envelope(&ReportEnvelope::new("dilation", &value, report, Vec::new()));
        out.failure = Some(CliError::Validation(format!("hypothesis failed: {}", check.failures.join(", "))));
        return Ok(out);
    }
    let c = cross_validate(&cd)?;
    let f = &c.factorizing;
    let report = json!({
        "conservation": conservation_json(&check),
        "factorizing": {
            "count": f.count,
            "verdict": f.verdict.as_str(),
            "states": f.states.iter().map(|s| json!({
                "nu": complexes(&s.nu),
                "eigenvalue": complex(s.eigenvalue),
                "residual": num(s.residual),
            })).collect::<Vec<_>>(),
            "degenerate_clusters": complexes(&f.degenerate_clusters),
        },
        "spectral": spectral_json(&c.spectral),
        "agree": c.agree,
        "fixed_point_distance": c.fixed_point_distance.map_or(Value::Null, num),
        "max_fixed_point_residual": num(c.max_fixed_point_residual),
    });
    let mut warnings = Vec::new();
    if !f.degenerate_clusters.is_empty() {
        warnings.push(format!("{} degenerate eigenvalue cluster(s) of U", f.degenerate_clusters.len()));
    }
    let mut out = Output::envelope(&ReportEnvelope::new("dilation", &value, report, warnings));
    if !c.agree {
        out.failure = Some(CliError::Numerical(format!(
            "factorizing count and spectrum disagree: {}",
            c.message.unwrap_or_default()
        )));
    }
    Ok(out)
}

/// `1, 10, 100, … ≤ n` followed by `n`.
fn checkpoints(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |k| k.checked_mul(10)).take_while(|&k| k < n).collect();
    out.push(n);
    out
}

pub fn cesaro(path: &Path, state_spec: &str, n: usize) -> CliResult<Output> {
    let (value, channel) = load_channel(path)?;
    let rho0 = parse_state(state_spec, channel.dim())?;
    let r = analyze_channel(&channel)?;
    let fixed = r.fixed_point();
    let mut warnings = Vec::new();
    if fixed.is_none() {
        warnings.push(format!("no unique fixed point (verdict {}); distances omitted", r.verdict));
    }
    let points = cesaro_checkpoints(&channel, &rho0, &checkpoints(n))?;
    let mut table = Vec::with_capacity(points.len());
    for (k, avg) in &points {
        let d = fixed.map(|f| avg.distance(f)).transpose()?;
        table.push(json!({
            "n": k,
            "distance": d.map_or(Value::Null, num),
            "rate_constant": d.map_or(Value::Null, |d| num(d * (*k + 1) as f64)),
        }));
    }
    let (_, average) = points.last().expect("at least one checkpoint");
    let distance = fixed.map(|f| average.distance(f)).transpose()?;
    let report = json!({
        "n": n,
        "initial_state": state(&rho0),
        "average": state(average),
        "fixed_point": fixed.map_or(Value::Null, state),
        "distance": distance.map_or(Value::Null, num),
        "table": table,
    });
    Ok(Output::envelope(&ReportEnvelope::new("cesaro", &value, report, warnings)))
}

pub fn zoo_list() -> Output {
    let entries: Vec<Value> = zoo::catalog()
        .iter()
        .map(|s| {
            json!({
                "id": s.id(),
                "name": s.name,
                "dim": s.dim,
                "parameters": s.parameters.iter().map(|(k, v)| (k.clone(), num(*v))).collect::<Map<_, _>>(),
                "expected_verdict": s.expected_verdict.map(Verdict::as_str),
                "provenance": s.provenance.as_str(),
            })
        })
        .collect();
    let input = json!({ "command": "zoo-list" });
    Output::envelope(&ReportEnvelope::new("zoo-list", &input, Value::Array(entries), Vec::new()))
}

/// Writes the channel document for a catalog entry, or its dilation
/// instance document when `as_dilation` is set.
pub fn zoo_emit(key: &str, as_dilation: bool) -> CliResult<Output> {
    let spec = zoo::find(key).ok_or_else(|| {
        let ids: Vec<String> = zoo::catalog().iter().map(|s| s.id()).collect();
        CliError::Usage(format!("no catalog entry {key:?}; known entries: {}", ids.join(" ")))
    })?;
    if as_dilation {
        let cd = zoo::build_dilation(&spec)?
            .ok_or_else(|| CliError::Usage(format!("{} is not a dilation family", spec.id())))?;
        return Ok(Output::ok(to_line(&DilationDoc::from_dilation(&cd))));
    }
    let channel = zoo::build(&spec)?;
    Ok(Output::ok(to_line(&ChannelDoc::from_channel(&channel))))
}
