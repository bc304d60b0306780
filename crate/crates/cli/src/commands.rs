//! Command implementations. Each returns an [`Execution`] or a [`CliError`]
//! carrying the exit code; nothing here prints.

use crate::format::{self, LoadError, Model, ModelKind};
use crate::report::{scenario_digest, sha256_hex, table, Report};
use nosig_core::analysis::{
    check_general_lambda_independence, check_lambda_independence, check_no_signalling,
    check_parameter_independence, ns_dimension, realize_nonneg, realize_signed_li,
    IndependenceReport, IndependenceWitness, NsViolation, RealizationMethod,
};
use nosig_core::exactmath::format_rational;
use nosig_core::generators::{self, GeneratorSpec, Generated};
use nosig_core::{EmpiricalModel, Scenario, Section};
use num::Zero;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        let code = if e.is_cap() { EXIT_CAP } else { EXIT_INPUT };
        CliError { code, message: e.to_string() }
    }
}

impl From<nosig_core::Error> for CliError {
    fn from(e: nosig_core::Error) -> Self {
        let code = match e {
            nosig_core::Error::EnumerationCap { .. } => EXIT_CAP,
            _ => EXIT_INPUT,
        };
        CliError { code, message: e.to_string() }
    }
}

/// A report plus an optional file produced by the command (a realized model
/// or a generated document).
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub report: Report,
    pub artifact: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Lambda,
    Parameter,
    Both,
}

fn labels_json(sc: &Scenario, set: &[usize]) -> Value {
    json!(sc.labels(set))
}

fn section_json(sc: &Scenario, s: &Section) -> Value {
    let map: Map<String, Value> = s
        .iter()
        .map(|(m, o)| (sc.measurements()[m].clone(), Value::String(sc.outcomes()[o].clone())))
        .collect();
    Value::Object(map)
}

fn context_label(sc: &Scenario, c: usize) -> String {
    format!("{{{}}}", sc.labels(sc.context(c)).join(","))
}

fn empirical(model: Model, command: &str) -> Result<EmpiricalModel, CliError> {
    match model {
        Model::Empirical(e) => Ok(e),
        other => Err(CliError::input(format!(
            "kind mismatch: {command} needs an empirical model, got {}",
            other.kind().name()
        ))),
    }
}

pub fn check_ns(command: Vec<String>, path: &Path, cap: usize) -> Result<Execution, CliError> {
    let e = empirical(format::load_model(path, cap)?, "check-ns")?;
    let sc = e.scenario();
    let report = check_no_signalling(&e);
    let mut pairs: Vec<((usize, usize), Vec<&NsViolation>)> = Vec::new();
    for v in &report.violations {
        match pairs.last_mut() {
            Some((key, group)) if *key == (v.first, v.second) => group.push(v),
            _ => pairs.push(((v.first, v.second), vec![v])),
        }
    }
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .map(|((i, j), group)| {
            let diffs: Vec<String> = group
                .iter()
                .map(|v| format!("{}: {} != {}", sc.format_section(&v.section), format_rational(&v.lhs), format_rational(&v.rhs)))
                .collect();
            vec![context_label(sc, *i), context_label(sc, *j), diffs.join("; ")]
        })
        .collect();
    let violations: Vec<Value> = pairs
        .iter()
        .map(|((i, j), group)| {
            let sections: Vec<Value> = group
                .iter()
                .map(|v| {
                    json!({
                        "section": section_json(sc, &v.section),
                        "lhs": format_rational(&v.lhs),
                        "rhs": format_rational(&v.rhs),
                    })
                })
                .collect();
            json!({
                "first": labels_json(sc, sc.context(*i)),
                "second": labels_json(sc, sc.context(*j)),
                "sections": sections,
            })
        })
        .collect();
    let holds = report.is_no_signalling();
    let human = if holds {
        "no-signalling: holds\n".to_string()
    } else {
        let n = pairs.len();
        format!(
            "no-signalling: fails ({n} signalling pair{})\n{}",
            if n == 1 { "" } else { "s" },
            table(&["first", "second", "marginal differences"], &rows)
        )
    };
    Ok(Execution {
        report: Report {
            command,
            scenario_digest: Some(scenario_digest(sc)),
            result: json!({ "no_signalling": holds, "violations": violations }),
            exit_status: if holds { EXIT_HOLDS } else { EXIT_FAILS },
            human,
        },
        artifact: None,
    })
}

pub fn realize(
    command: Vec<String>,
    path: &Path,
    method: RealizationMethod,
    require_nonneg: bool,
    cap: usize,
) -> Result<Execution, CliError> {
    let e = empirical(format::load_model(path, cap)?, "realize")?;
    let sc = e.scenario();
    let result = if require_nonneg {
        realize_nonneg(&e)?
    } else {
        realize_signed_li(&e, method)?
    };
    let contexts: Vec<Value> = (0..sc.num_contexts())
        .map(|c| json!({ "context": labels_json(sc, sc.context(c)), "weight": format_rational(result.context_dist.get(c)) }))
        .collect();
    let mut human = format!("method: {}\n", result.method.name());
    let mut payload = Map::new();
    payload.insert("method".into(), json!(result.method.name()));
    payload.insert("realized".into(), json!(result.is_realized()));
    let mut artifact = None;
    match (&result.hidden_dist, &result.negativity) {
        (Some(hidden), Some(neg)) => {
            let globals = sc.enumerate_globals()?;
            let support: Vec<(String, String)> = globals
                .iter()
                .zip(hidden.weights())
                .filter(|(_, w)| !w.is_zero())
                .map(|(g, w)| (sc.format_global(g), format_rational(w)))
                .collect();
            human.push_str(&format!("realized: yes\nnegativity: {}\nhidden distribution (nonzero weights):\n", format_rational(neg)));
            let rows: Vec<Vec<String>> = support.iter().map(|(g, w)| vec![g.clone(), w.clone()]).collect();
            human.push_str(&table(&["global", "weight"], &rows));
            payload.insert("negativity".into(), json!(format_rational(neg)));
            let hidden_json: Vec<Value> = globals
                .iter()
                .zip(hidden.weights())
                .filter(|(_, w)| !w.is_zero())
                .map(|(g, w)| json!({ "global": section_json(sc, &g.as_section()), "weight": format_rational(w) }))
                .collect();
            payload.insert("hidden_dist".into(), Value::Array(hidden_json));
            payload.insert("context_dist".into(), Value::Array(contexts));
            let model = Model::Schv(result.model().expect("realized results carry a model"));
            payload.insert(
                "model".into(),
                serde_json::to_value(format::model_to_doc(&model)).expect("documents serialize"),
            );
            artifact = Some(format::emit_model(&model));
        }
        _ => {
            human.push_str("realized: no\n");
            payload.insert("negativity".into(), Value::Null);
        }
    }
    Ok(Execution {
        report: Report {
            command,
            scenario_digest: Some(scenario_digest(sc)),
            result: Value::Object(payload),
            exit_status: if result.is_realized() { EXIT_HOLDS } else { EXIT_FAILS },
            human,
        },
        artifact,
    })
}

fn witness_json(sc: &Scenario, hidden: &[String], w: &IndependenceWitness) -> (Value, String) {
    match w {
        IndependenceWitness::Lambda { global, context, joint, product } => {
            let omega = sc.enumerate_globals().expect("model already passed the cap")[*global].clone();
            (
                json!({
                    "global": section_json(sc, &omega.as_section()),
                    "context": labels_json(sc, sc.context(*context)),
                    "joint": format_rational(joint),
                    "product": format_rational(product),
                }),
                format!(
                    "m({}, {}) = {} but m_Omega * m_U = {}",
                    sc.format_global(&omega),
                    context_label(sc, *context),
                    format_rational(joint),
                    format_rational(product)
                ),
            )
        }
        IndependenceWitness::GeneralLambda { context, hidden: l, joint, product } => (
            json!({
                "context": labels_json(sc, sc.context(*context)),
                "lambda": hidden[*l],
                "joint": format_rational(joint),
                "product": format_rational(product),
            }),
            format!(
                "h({}, {}) = {} but h_U * h_Lambda = {}",
                context_label(sc, *context),
                hidden[*l],
                format_rational(joint),
                format_rational(product)
            ),
        ),
        IndependenceWitness::Parameter { first, second, section, hidden: l, lhs, rhs } => (
            json!({
                "first": labels_json(sc, sc.context(*first)),
                "second": labels_json(sc, sc.context(*second)),
                "section": section_json(sc, section),
                "lambda": hidden[*l],
                "lhs": format_rational(lhs),
                "rhs": format_rational(rhs),
            }),
            format!(
                "h({s} | {u}, {l}) = {a} but h({s} | {v}, {l}) = {b}",
                s = sc.format_section(section),
                u = context_label(sc, *first),
                v = context_label(sc, *second),
                l = hidden[*l],
                a = format_rational(lhs),
                b = format_rational(rhs)
            ),
        ),
    }
}

fn check_entry(name: &str, sc: &Scenario, hidden: &[String], r: &IndependenceReport, human: &mut String) -> Value {
    let (witness, line) = match &r.witness {
        Some(w) => {
            let (v, l) = witness_json(sc, hidden, w);
            (v, Some(l))
        }
        None => (Value::Null, None),
    };
    human.push_str(&format!("{name}: {}\n", if r.holds { "holds" } else { "fails" }));
    if let Some(l) = line {
        human.push_str(&format!("  witness: {l}\n"));
    }
    if r.vacuous > 0 {
        human.push_str(&format!("  vacuous comparisons: {}\n", r.vacuous));
    }
    json!({ "check": name, "holds": r.holds, "vacuous": r.vacuous, "witness": witness })
}

pub fn check_independence(command: Vec<String>, path: &Path, which: Which, cap: usize) -> Result<Execution, CliError> {
    let model = format::load_model(path, cap)?;
    let kind = model.kind();
    let scenario = model.scenario().clone();
    let (lambda_report, general) = match model {
        Model::Empirical(_) => {
            return Err(CliError::input(
                "kind mismatch: independence checks need an schv or general model, got empirical",
            ))
        }
        Model::Schv(m) => (
            (which != Which::Parameter).then(|| check_lambda_independence(&m)),
            (which != Which::Lambda).then(|| m.embed_canonical()),
        ),
        Model::General(h) => (
            (which != Which::Parameter).then(|| check_general_lambda_independence(&h)),
            Some(h),
        ),
    };
    let sc = &scenario;
    let mut human = format!("kind: {}\n", kind.name());
    let mut checks = Vec::new();
    let mut all_hold = true;
    if let Some(r) = &lambda_report {
        let hidden = general.as_ref().map(|h| h.hidden().to_vec()).unwrap_or_default();
        checks.push(check_entry("lambda", sc, &hidden, r, &mut human));
        all_hold &= r.holds;
    }
    if which != Which::Lambda {
        let h = general.as_ref().expect("parameter check has a general model");
        if kind == ModelKind::Schv {
            human.push_str("parameter check runs on the canonical embedding\n");
        }
        let r = check_parameter_independence(h);
        checks.push(check_entry("parameter", sc, h.hidden(), &r, &mut human));
        all_hold &= r.holds;
    }
    Ok(Execution {
        report: Report {
            command,
            scenario_digest: Some(scenario_digest(sc)),
            result: json!({ "kind": kind.name(), "checks": checks }),
            exit_status: if all_hold { EXIT_HOLDS } else { EXIT_FAILS },
            human,
        },
        artifact: None,
    })
}

pub fn dimension(command: Vec<String>, path: &Path, cap: usize) -> Result<Execution, CliError> {
    let sc = format::load_scenario(path, cap)?;
    let r = ns_dimension(&sc).map_err(|e| match e {
        nosig_core::Error::EnumerationCap { required, cap } => CliError {
            code: EXIT_CAP,
            message: format!(
                "the scenario has {required} global assignments, above the enumeration cap of {cap}; \
                 raise --enumeration-cap to at least {required}"
            ),
        },
        other => other.into(),
    })?;
    let verdict = if r.consistent() { "PASS" } else { "FAIL" };
    Ok(Execution {
        report: Report {
            command,
            scenario_digest: Some(scenario_digest(&sc)),
            result: json!({ "d": r.d, "rank_l": r.rank_l, "basis_rank": r.basis_rank, "verdict": verdict }),
            exit_status: if r.consistent() { EXIT_HOLDS } else { EXIT_FAILS },
            human: format!(
                "D: {}\nrank_L: {}\nbasis_rank: {}\n{} / {} / {} {verdict}\n",
                r.d, r.rank_l, r.basis_rank, r.d, r.rank_l, r.basis_rank
            ),
        },
        artifact: None,
    })
}

pub fn generate(command: Vec<String>, name: &str, parameters: BTreeMap<String, String>) -> Result<Execution, CliError> {
    let spec = GeneratorSpec { name: name.to_string(), parameters: parameters.clone() };
    let (kind, scenario, text) = match generators::generate(&spec)? {
        Generated::Scenario(s) => ("scenario", s.clone(), format::emit_scenario(&s)),
        Generated::Empirical(e) => ("empirical", e.scenario().clone(), format::emit_model(&Model::Empirical(e))),
        Generated::Schv(m) => ("schv", m.scenario().clone(), format::emit_model(&Model::Schv(m))),
        Generated::General(h) => ("general", h.scenario().clone(), format::emit_model(&Model::General(h))),
    };
    let digest = sha256_hex(text.as_bytes());
    Ok(Execution {
        report: Report {
            command,
            scenario_digest: Some(scenario_digest(&scenario)),
            result: json!({ "generator": name, "parameters": parameters, "kind": kind, "digest": digest }),
            exit_status: EXIT_HOLDS,
            human: format!("generator: {name}\nkind: {kind}\ndigest: {digest}\n"),
        },
        artifact: Some(text),
    })
}
