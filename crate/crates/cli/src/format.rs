//! JSON documents for scenarios and models.
//!
//! Rationals are always strings (`"1/8"`, `"-3/4"`, `"1"`). Emission is canonical:
//! fixed key order, entries in index order, zero weights omitted, section maps
//! sorted by measurement label, and a trailing newline.

use nosig_core::exactmath::{format_rational, parse_rational};
use nosig_core::{EmpiricalModel, GeneralHvModel, Rational, Scenario, SchvModel, Section};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub measurements: Vec<String>,
    pub cover: Vec<Vec<String>>,
    pub outcomes: Vec<String>,
}

/// A model's scenario, given inline or as a path relative to the model file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Inline(ScenarioDoc),
    Path(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Empirical,
    Schv,
    General,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Empirical => "empirical",
            ModelKind::Schv => "schv",
            ModelKind::General => "general",
        }
    }
}

/// One weighted entry. Which fields are present depends on the model kind:
/// empirical `(context, section)`, schv `(global, context)`, general
/// `(context, section, lambda)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub context: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub kind: ModelKind,
    pub scenario: ScenarioRef,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden: Option<Vec<String>>,
    pub entries: Vec<EntryDoc>,
}

/// A parsed model of any kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Empirical(EmpiricalModel),
    Schv(SchvModel),
    General(GeneralHvModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Empirical(_) => ModelKind::Empirical,
            Model::Schv(_) => ModelKind::Schv,
            Model::General(_) => ModelKind::General,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        match self {
            Model::Empirical(m) => m.scenario(),
            Model::Schv(m) => m.scenario(),
            Model::General(m) => m.scenario(),
        }
    }
}

/// A failure to read or interpret an input document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    Io { path: String, message: String },
    Syntax { origin: String, line: usize, column: usize, message: String },
    Invalid { origin: String, location: String, message: String },
    /// Enumerating the scenario's global assignments would exceed the cap.
    Cap { origin: String, message: String },
}

impl LoadError {
    pub fn is_cap(&self) -> bool {
        matches!(self, LoadError::Cap { .. })
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, message } => write!(f, "{path}: {message}"),
            LoadError::Syntax { origin, line, column, message } => {
                write!(f, "{origin}:{line}:{column}: {message}")
            }
            LoadError::Invalid { origin, location, message } => {
                write!(f, "{origin}: {location}: {message}")
            }
            LoadError::Cap { origin, message } => write!(f, "{origin}: {message}"),
        }
    }
}

impl std::error::Error for LoadError {}

struct Ctx<'a> {
    origin: &'a str,
}

impl Ctx<'_> {
    fn invalid(&self, location: impl Into<String>, message: impl fmt::Display) -> LoadError {
        LoadError::Invalid {
            origin: self.origin.to_string(),
            location: location.into(),
            message: message.to_string(),
        }
    }

    fn core(&self, location: impl Into<String>, err: nosig_core::Error) -> LoadError {
        match err {
            nosig_core::Error::EnumerationCap { .. } => LoadError::Cap {
                origin: self.origin.to_string(),
                message: err.to_string(),
            },
            other => self.invalid(location, other),
        }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Syntax {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: {
            let full = e.to_string();
            match full.rfind(" at line ") {
                Some(i) => full[..i].to_string(),
                None => full,
            }
        },
    })
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn scenario_from_doc(doc: &ScenarioDoc, origin: &str, cap: usize) -> Result<Scenario, LoadError> {
    let ctx = Ctx { origin };
    Scenario::new(doc.measurements.clone(), doc.cover.clone(), doc.outcomes.clone())
        .map(|s| s.with_enumeration_cap(cap))
        .map_err(|e| ctx.invalid("scenario", e))
}

pub fn scenario_to_doc(scenario: &Scenario) -> ScenarioDoc {
    ScenarioDoc {
        measurements: scenario.measurements().to_vec(),
        cover: scenario
            .cover()
            .iter()
            .map(|c| scenario.labels(c))
            .collect(),
        outcomes: scenario.outcomes().to_vec(),
    }
}

pub fn parse_scenario(text: &str, origin: &str, cap: usize) -> Result<Scenario, LoadError> {
    let doc: ScenarioDoc = parse_json(text, origin)?;
    scenario_from_doc(&doc, origin, cap)
}

pub fn load_scenario(path: &Path, cap: usize) -> Result<Scenario, LoadError> {
    parse_scenario(&read(path)?, &path.display().to_string(), cap)
}

/// Parses a model document. A scenario given by path is resolved against
/// `base_dir`.
pub fn parse_model(text: &str, origin: &str, base_dir: &Path, cap: usize) -> Result<Model, LoadError> {
    let doc: ModelDoc = parse_json(text, origin)?;
    model_from_doc(&doc, origin, base_dir, cap)
}

pub fn load_model(path: &Path, cap: usize) -> Result<Model, LoadError> {
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_model(&read(path)?, &path.display().to_string(), &base, cap)
}

fn resolve_context(
    ctx: &Ctx,
    sc: &Scenario,
    labels: Option<&Vec<String>>,
    loc: &str,
) -> Result<usize, LoadError> {
    let labels = labels.ok_or_else(|| ctx.invalid(loc, "missing field `context`"))?;
    let set = sc
        .measurement_set(labels)
        .map_err(|e| ctx.invalid(format!("{loc}.context"), e))?;
    if set.len() != labels.len() {
        return Err(ctx.invalid(format!("{loc}.context"), "repeated measurement"));
    }
    sc.context_index(&set)
        .ok_or_else(|| ctx.invalid(format!("{loc}.context"), format!("{{{}}} is not a context of the cover", labels.join(","))))
}

fn resolve_section(
    ctx: &Ctx,
    sc: &Scenario,
    map: Option<&BTreeMap<String, String>>,
    field: &str,
    domain: &[usize],
    loc: &str,
) -> Result<Section, LoadError> {
    let map = map.ok_or_else(|| ctx.invalid(loc, format!("missing field `{field}`")))?;
    let mut pairs = Vec::with_capacity(map.len());
    for (m, o) in map {
        let mi = sc.measurement_index(m).map_err(|e| ctx.invalid(format!("{loc}.{field}"), e))?;
        let oi = sc.outcome_index(o).map_err(|e| ctx.invalid(format!("{loc}.{field}"), e))?;
        pairs.push((mi, oi));
    }
    let section = Section::from_pairs(pairs);
    if section.domain() != domain {
        return Err(ctx.invalid(
            format!("{loc}.{field}"),
            format!("must assign exactly {{{}}}", sc.labels(domain).join(",")),
        ));
    }
    Ok(section)
}

fn forbid(ctx: &Ctx, present: bool, field: &str, kind: ModelKind, loc: &str) -> Result<(), LoadError> {
    if present {
        Err(ctx.invalid(loc, format!("field `{field}` is not allowed in a {} model", kind.name())))
    } else {
        Ok(())
    }
}

pub fn model_from_doc(doc: &ModelDoc, origin: &str, base_dir: &Path, cap: usize) -> Result<Model, LoadError> {
    let ctx = Ctx { origin };
    let sc = match &doc.scenario {
        ScenarioRef::Inline(s) => scenario_from_doc(s, origin, cap)?,
        ScenarioRef::Path(p) => load_scenario(&base_dir.join(p), cap)?,
    };
    let kind = doc.kind;
    forbid(&ctx, doc.hidden.is_some() && kind != ModelKind::General, "hidden", kind, "hidden")?;

    let (len, hidden) = match kind {
        ModelKind::Empirical => (sc.num_events(), Vec::new()),
        ModelKind::Schv => {
            let p = sc.num_globals().map_err(|e| ctx.core("scenario", e))?;
            (p * sc.num_contexts(), Vec::new())
        }
        ModelKind::General => {
            let hidden = doc
                .hidden
                .clone()
                .ok_or_else(|| ctx.invalid("hidden", "a general model needs a `hidden` list"))?;
            (sc.num_events() * hidden.len(), hidden)
        }
    };
    let mut weights = vec![Rational::zero(); len];
    let mut seen = HashSet::new();
    let all: Vec<usize> = (0..sc.num_measurements()).collect();
    for (i, entry) in doc.entries.iter().enumerate() {
        let loc = format!("entries[{i}]");
        let weight = parse_rational(&entry.weight).map_err(|e| ctx.invalid(format!("{loc}.weight"), e))?;
        let index = match kind {
            ModelKind::Empirical => {
                forbid(&ctx, entry.global.is_some(), "global", kind, &loc)?;
                forbid(&ctx, entry.lambda.is_some(), "lambda", kind, &loc)?;
                let c = resolve_context(&ctx, &sc, entry.context.as_ref(), &loc)?;
                let s = resolve_section(&ctx, &sc, entry.section.as_ref(), "section", sc.context(c), &loc)?;
                sc.event_index(c, &s)
            }
            ModelKind::Schv => {
                forbid(&ctx, entry.section.is_some(), "section", kind, &loc)?;
                forbid(&ctx, entry.lambda.is_some(), "lambda", kind, &loc)?;
                let c = resolve_context(&ctx, &sc, entry.context.as_ref(), &loc)?;
                let g = resolve_section(&ctx, &sc, entry.global.as_ref(), "global", &all, &loc)?;
                let omega = nosig_core::GlobalAssignment::new(g.values().to_vec());
                sc.global_index(&omega) * sc.num_contexts() + c
            }
            ModelKind::General => {
                forbid(&ctx, entry.global.is_some(), "global", kind, &loc)?;
                let c = resolve_context(&ctx, &sc, entry.context.as_ref(), &loc)?;
                let s = resolve_section(&ctx, &sc, entry.section.as_ref(), "section", sc.context(c), &loc)?;
                let lambda = entry
                    .lambda
                    .as_ref()
                    .ok_or_else(|| ctx.invalid(&loc, "missing field `lambda`"))?;
                let l = hidden
                    .iter()
                    .position(|h| h == lambda)
                    .ok_or_else(|| ctx.invalid(format!("{loc}.lambda"), format!("unknown hidden value {lambda:?}")))?;
                sc.event_index(c, &s) * hidden.len() + l
            }
        };
        if !seen.insert(index) {
            return Err(ctx.invalid(&loc, "duplicate entry"));
        }
        weights[index] = weight;
    }

    Ok(match kind {
        ModelKind::Empirical => Model::Empirical(
            EmpiricalModel::new(sc, weights).map_err(|e| ctx.core("entries", e))?,
        ),
        ModelKind::Schv => Model::Schv(SchvModel::new(sc, weights).map_err(|e| ctx.core("entries", e))?),
        ModelKind::General => Model::General(
            GeneralHvModel::new(sc, hidden, weights).map_err(|e| ctx.core("entries", e))?,
        ),
    })
}

fn section_map(sc: &Scenario, s: &Section) -> BTreeMap<String, String> {
    s.iter()
        .map(|(m, o)| (sc.measurements()[m].clone(), sc.outcomes()[o].clone()))
        .collect()
}

pub fn model_to_doc(model: &Model) -> ModelDoc {
    let sc = model.scenario();
    let mut entries = Vec::new();
    let mut hidden = None;
    match model {
        Model::Empirical(e) => {
            for (i, ev) in sc.events().iter().enumerate() {
                let w = e.weight(i);
                if w.is_zero() {
                    continue;
                }
                entries.push(EntryDoc {
                    global: None,
                    context: Some(sc.labels(sc.context(ev.context))),
                    section: Some(section_map(sc, &ev.section)),
                    lambda: None,
                    weight: format_rational(w),
                });
            }
        }
        Model::Schv(m) => {
            let globals = sc.enumerate_globals().expect("model already passed the cap");
            for (g, omega) in globals.iter().enumerate() {
                for c in 0..sc.num_contexts() {
                    let w = m.weight(g, c);
                    if w.is_zero() {
                        continue;
                    }
                    entries.push(EntryDoc {
                        global: Some(section_map(sc, &omega.as_section())),
                        context: Some(sc.labels(sc.context(c))),
                        section: None,
                        lambda: None,
                        weight: format_rational(w),
                    });
                }
            }
        }
        Model::General(h) => {
            hidden = Some(h.hidden().to_vec());
            for (i, ev) in sc.events().iter().enumerate() {
                for (l, label) in h.hidden().iter().enumerate() {
                    let w = h.weight(i, l);
                    if w.is_zero() {
                        continue;
                    }
                    entries.push(EntryDoc {
                        global: None,
                        context: Some(sc.labels(sc.context(ev.context))),
                        section: Some(section_map(sc, &ev.section)),
                        lambda: Some(label.clone()),
                        weight: format_rational(w),
                    });
                }
            }
        }
    }
    ModelDoc {
        kind: model.kind(),
        scenario: ScenarioRef::Inline(scenario_to_doc(sc)),
        hidden,
        entries,
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn emit_scenario(scenario: &Scenario) -> String {
    to_canonical_json(&scenario_to_doc(scenario))
}

pub fn emit_model(model: &Model) -> String {
    to_canonical_json(&model_to_doc(model))
}
