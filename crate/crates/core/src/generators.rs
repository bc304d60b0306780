//! Built-in scenarios and models, plus seeded random corpora.
//!
//! Random generators are deterministic in their seed (ChaCha8). Raw weights are
//! drawn as integers in `1..=64` and normalized, which keeps denominators small
//! enough for exact pivoting.

use crate::analysis::apply_incidence;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::models::{EmpiricalModel, GeneralHvModel, SchvModel, SignedDist};
use crate::scenario::{intersect, GlobalAssignment, Scenario, Section};
use num::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

const MAX_RAW_WEIGHT: i64 = 64;

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn letter_label(index: usize, count: usize) -> String {
    if count <= 26 {
        ((b'a' + index as u8) as char).to_string()
    } else {
        format!("m{index}")
    }
}

fn param_error(name: &str, reason: impl Into<String>) -> Error {
    Error::GeneratorParameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}

/// Bell scenario: `parties` sites with `settings` measurements each; every context
/// picks one setting per site. Measurement labels are `a0, a1, …, b0, …`.
pub fn bell(parties: usize, settings: usize, outcomes: usize) -> Result<Scenario> {
    if parties == 0 {
        return Err(param_error("parties", "must be at least 1"));
    }
    if settings == 0 {
        return Err(param_error("settings", "must be at least 1"));
    }
    if outcomes < 2 {
        return Err(param_error("outcomes", "must be at least 2"));
    }
    let site = |p: usize| letter_label(p, parties);
    let measurements: Vec<String> = (0..parties)
        .flat_map(|p| (0..settings).map(move |k| format!("{}{}", site(p), k)))
        .collect();
    let num_contexts = settings
        .checked_pow(parties as u32)
        .ok_or_else(|| param_error("parties", "too many contexts"))?;
    let cover: Vec<Vec<String>> = (0..num_contexts)
        .map(|mut idx| {
            let mut choice = vec![0; parties];
            for slot in choice.iter_mut().rev() {
                *slot = idx % settings;
                idx /= settings;
            }
            choice
                .iter()
                .enumerate()
                .map(|(p, k)| format!("{}{}", site(p), k))
                .collect()
        })
        .collect();
    Scenario::new(measurements, cover, (0..outcomes).map(|o| o.to_string()).collect::<Vec<_>>())
}

/// A single context containing all `measurements` measurements.
pub fn single_context(measurements: usize, outcomes: usize) -> Result<Scenario> {
    if measurements == 0 {
        return Err(param_error("measurements", "must be at least 1"));
    }
    if outcomes < 2 {
        return Err(param_error("outcomes", "must be at least 2"));
    }
    let labels: Vec<String> = (0..measurements)
        .map(|i| letter_label(i, measurements))
        .collect();
    Scenario::new(
        labels.clone(),
        vec![labels],
        (0..outcomes).map(|o| o.to_string()).collect::<Vec<_>>(),
    )
}

/// Three binary measurements, pairwise compatible: `{a,b}, {b,c}, {a,c}`.
pub fn triangle() -> Scenario {
    Scenario::new(
        ["a", "b", "c"],
        [vec!["a", "b"], vec!["b", "c"], vec!["a", "c"]],
        ["0", "1"],
    )
    .expect("static scenario")
}

/// The PR box over `bell(2, 2, 2)`: contexts weighted 1/4, and `e_U(s) = 1/2` when
/// `s(a_i) ⊕ s(b_j) = i ∧ j`, else 0.
pub fn pr_box() -> EmpiricalModel {
    let sc = bell(2, 2, 2).expect("static scenario");
    let table = sc
        .events()
        .iter()
        .map(|ev| {
            let ctx = sc.context(ev.context);
            let (i, j) = (ctx[0], ctx[1] - 2);
            let (x, y) = (ev.section.values()[0], ev.section.values()[1]);
            if x ^ y == i & j {
                r(1, 8)
            } else {
                Rational::zero()
            }
        })
        .collect();
    EmpiricalModel::new(sc, table).expect("static model")
}

/// Perfect anti-correlation in every context of [`triangle`], contexts weighted 1/3.
pub fn triangle_anticorrelated() -> EmpiricalModel {
    let sc = triangle();
    let table = sc
        .events()
        .iter()
        .map(|ev| {
            let v = ev.section.values();
            if v[0] != v[1] {
                r(1, 6)
            } else {
                Rational::zero()
            }
        })
        .collect();
    EmpiricalModel::new(sc, table).expect("static model")
}

/// The general hidden-variable model over the cover `{{a,b0},{a,b1}}` with outcomes
/// `{x0,x1,y}` and hidden values `{lambda0, lambda1}`, assigning 1/4 to each of
/// `(U,s0,λ0), (V,s1,λ1), (V,s2,λ0), (U,s3,λ1)` where `U = {a,b0}`, `V = {a,b1}`,
/// `s0 = {a↦x0, b0↦y}`, `s1 = {a↦x0, b1↦y}`, `s2 = {a↦x1, b1↦y}`,
/// `s3 = {a↦x1, b0↦y}`.
///
/// It is Lambda-Independent and realizes a No-Signalling table, but fails
/// Parameter-Independence.
pub fn section3_counterexample() -> GeneralHvModel {
    let sc = Scenario::new(
        ["a", "b0", "b1"],
        [vec!["a", "b0"], vec!["a", "b1"]],
        ["x0", "x1", "y"],
    )
    .expect("static scenario");
    let hidden = vec!["lambda0".to_string(), "lambda1".to_string()];
    let mut weights = vec![Rational::zero(); sc.num_events() * 2];
    let entries = [
        (0, [("a", "x0"), ("b0", "y")], 0),
        (1, [("a", "x0"), ("b1", "y")], 1),
        (1, [("a", "x1"), ("b1", "y")], 0),
        (0, [("a", "x1"), ("b0", "y")], 1),
    ];
    for (context, pairs, lambda) in entries {
        let section = sc.section(&pairs).expect("static labels");
        weights[sc.event_index(context, &section) * 2 + lambda] = r(1, 4);
    }
    GeneralHvModel::new(sc, hidden, weights).expect("static model")
}

/// The deterministic table predicted by one global assignment, contexts weighted
/// uniformly.
pub fn deterministic(scenario: &Scenario, global: &GlobalAssignment) -> Result<EmpiricalModel> {
    if global.values().len() != scenario.num_measurements() {
        return Err(Error::DimensionMismatch {
            op: "generators::deterministic",
            expected: scenario.num_measurements(),
            found: global.values().len(),
        });
    }
    let k = scenario.num_contexts();
    let table = scenario
        .events()
        .iter()
        .map(|ev| {
            if global.agrees_with(&ev.section) {
                r(1, k as i64)
            } else {
                Rational::zero()
            }
        })
        .collect();
    EmpiricalModel::new(scenario.clone(), table)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` positive weights with total mass 1.
fn positive_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=MAX_RAW_WEIGHT)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|x| r(x, total)).collect()
}

/// Options for [`random_ns_model_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomNsOptions {
    /// Add a signed, zero-mass perturbation to the hidden distribution, scaled so
    /// the resulting table stays nonnegative. Without it the model is local.
    pub perturb: bool,
}

impl Default for RandomNsOptions {
    fn default() -> Self {
        RandomNsOptions { perturb: true }
    }
}

/// A signed distribution on Ω whose image under the incidence map is nonnegative.
fn random_hidden(sc: &Scenario, rng: &mut ChaCha8Rng, perturb: bool) -> Result<Vec<Rational>> {
    let p = sc.num_globals()?;
    let draws = rng.gen_range(1..=p);
    let mut raw = vec![0i64; p];
    for _ in 0..draws {
        raw[rng.gen_range(0..p)] += rng.gen_range(1..=MAX_RAW_WEIGHT);
    }
    let total: i64 = raw.iter().sum();
    let mut v: Vec<Rational> = raw.iter().map(|&x| r(x, total)).collect();
    if !perturb {
        return Ok(v);
    }

    let shift: Vec<i64> = (0..p).map(|_| rng.gen_range(-8..=8)).collect();
    let mean = r(shift.iter().sum(), p as i64);
    let direction: Vec<Rational> = shift.iter().map(|&x| r(x, 1) - &mean).collect();
    let base = apply_incidence(sc, &v)?;
    let image = apply_incidence(sc, &direction)?;
    // Largest step keeping every table entry nonnegative.
    let limit = base
        .iter()
        .zip(&image)
        .filter(|(_, u)| u.is_negative())
        .map(|(b, u)| b / -u)
        .min()
        .unwrap_or_else(|| r(1, 1));
    let step = limit * r(rng.gen_range(1..=8), 8);
    for (x, d) in v.iter_mut().zip(&direction) {
        *x += &step * d;
    }
    Ok(v)
}

/// A random No-Signalling table over `scenario`, deterministic in `seed`.
pub fn random_ns_model(scenario: &Scenario, seed: u64) -> Result<EmpiricalModel> {
    random_ns_model_with(scenario, seed, RandomNsOptions::default())
}

pub fn random_ns_model_with(scenario: &Scenario, seed: u64, options: RandomNsOptions) -> Result<EmpiricalModel> {
    let mut rng = rng_for(seed);
    let hidden = random_hidden(scenario, &mut rng, options.perturb)?;
    let conditionals = apply_incidence(scenario, &hidden)?;
    let contexts = positive_weights(&mut rng, scenario.num_contexts());
    EmpiricalModel::from_conditionals(scenario.clone(), &contexts, &conditionals)
}

/// A signalling table together with the context pair and section where the
/// marginals were pulled apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignallingSample {
    pub model: EmpiricalModel,
    pub first: usize,
    pub second: usize,
    pub section: Section,
}

/// Starts from [`random_ns_model`] and moves a positive amount of conditional mass
/// in one context between two sections that differ on its overlap with another
/// context. The marginals on that overlap then disagree.
pub fn random_signalling_model(scenario: &Scenario, seed: u64) -> Result<SignallingSample> {
    let pairs: Vec<(usize, usize)> = (0..scenario.num_contexts())
        .flat_map(|i| (0..scenario.num_contexts()).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && !intersect(scenario.context(i), scenario.context(j)).is_empty())
        .collect();
    if pairs.is_empty() {
        return Err(Error::UnsupportedScenario(
            "no two contexts share a measurement".into(),
        ));
    }
    let base = random_ns_model(scenario, seed)?;
    // A separate stream so the base model matches random_ns_model(seed).
    let mut rng = rng_for(seed ^ 0x5eed_5157_a11e_d000);
    let (first, second) = pairs[rng.gen_range(0..pairs.len())];
    let common = intersect(scenario.context(first), scenario.context(second));

    let mut conditionals = base.conditional_vector();
    let offset = scenario.event_offset(first);
    let sections: Vec<Section> = scenario.sections(scenario.context(first)).collect();
    let support: Vec<usize> = (0..sections.len())
        .filter(|&k| conditionals[offset + k].is_positive())
        .collect();
    let from = support[rng.gen_range(0..support.len())];
    let pivot = common[rng.gen_range(0..common.len())];
    let current = sections[from].get(pivot).expect("pivot lies in the context");
    let others: Vec<usize> = (0..scenario.num_outcomes()).filter(|&o| o != current).collect();
    let to_section = sections[from].override_at(scenario, pivot, others[rng.gen_range(0..others.len())])?;
    let to = scenario.section_index(&to_section);

    let delta = &conditionals[offset + from] * r(rng.gen_range(1..=8), 8);
    conditionals[offset + from] -= &delta;
    conditionals[offset + to] += &delta;
    let contexts = base.context_distribution();
    let model = EmpiricalModel::from_conditionals(scenario.clone(), contexts.weights(), &conditionals)?;
    Ok(SignallingSample {
        model,
        first,
        second,
        section: sections[from].restrict(&common),
    })
}

/// An arbitrary signed canonical model with small integer numerators.
pub fn random_schv(scenario: &Scenario, seed: u64) -> Result<SchvModel> {
    let mut rng = rng_for(seed);
    let n = scenario.num_globals()? * scenario.num_contexts();
    let mut raw: Vec<i64> = (0..n).map(|_| rng.gen_range(-16..=32)).collect();
    let mut total: i64 = raw.iter().sum();
    if total == 0 {
        raw[0] += 1;
        total = 1;
    }
    SchvModel::new(scenario.clone(), raw.into_iter().map(|x| r(x, total)).collect())
}

/// A Lambda-Independent canonical model whose marginalization is an empirical
/// model: a possibly signed hidden distribution with nonnegative image times
/// positive context weights.
pub fn random_li_schv(scenario: &Scenario, seed: u64) -> Result<SchvModel> {
    let mut rng = rng_for(seed);
    let hidden = SignedDist::new(random_hidden(scenario, &mut rng, true)?)?;
    let contexts = SignedDist::new(positive_weights(&mut rng, scenario.num_contexts()))?;
    SchvModel::product(scenario.clone(), &hidden, &contexts)
}

/// A nonnegative general model that is Lambda- and Parameter-Independent: each
/// hidden value fixes an independent outcome distribution per measurement, and the
/// context choice is independent of the hidden value.
pub fn random_local_general(scenario: &Scenario, seed: u64, hidden_count: usize) -> Result<GeneralHvModel> {
    if hidden_count == 0 {
        return Err(param_error("hidden", "must be at least 1"));
    }
    let mut rng = rng_for(seed);
    let hidden_weights = positive_weights(&mut rng, hidden_count);
    let context_weights = positive_weights(&mut rng, scenario.num_contexts());
    let response: Vec<Vec<Vec<Rational>>> = (0..hidden_count)
        .map(|_| {
            (0..scenario.num_measurements())
                .map(|_| positive_weights(&mut rng, scenario.num_outcomes()))
                .collect()
        })
        .collect();
    let mut weights = Vec::with_capacity(scenario.num_events() * hidden_count);
    for ev in scenario.events() {
        for (l, resp) in response.iter().enumerate() {
            let outcome: Rational = ev.section.iter().map(|(m, o)| resp[m][o].clone()).product();
            weights.push(outcome * &context_weights[ev.context] * &hidden_weights[l]);
        }
    }
    let labels = (0..hidden_count).map(|l| format!("lambda{l}")).collect();
    GeneralHvModel::new(scenario.clone(), labels, weights)
}

/// Names accepted by [`generate`].
pub const REGISTERED_GENERATORS: &[&str] = &[
    "bell",
    "single-context",
    "triangle",
    "pr-box",
    "triangle-anticorrelated",
    "section3",
    "random-ns",
    "random-signalling",
    "random-schv",
];

/// A generator addressed by name with string-valued parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
}

/// Output of [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Scenario(Scenario),
    Empirical(EmpiricalModel),
    Schv(SchvModel),
    General(GeneralHvModel),
}

struct Params<'a> {
    values: &'a BTreeMap<String, String>,
    used: Vec<&'static str>,
}

impl Params<'_> {
    fn count(&mut self, name: &'static str, default: usize) -> Result<usize> {
        self.used.push(name);
        match self.values.get(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| param_error(name, format!("expected a non-negative integer, got {v:?}"))),
        }
    }

    fn seed(&mut self) -> Result<u64> {
        self.count("seed", 0).map(|s| s as u64)
    }

    fn flag(&mut self, name: &'static str, default: bool) -> Result<bool> {
        self.used.push(name);
        match self.values.get(name).map(String::as_str) {
            None => Ok(default),
            Some("true" | "1") => Ok(true),
            Some("false" | "0") => Ok(false),
            Some(v) => Err(param_error(name, format!("expected true or false, got {v:?}"))),
        }
    }

    /// Base scenario for the random generators: `bell` (default) or `triangle`.
    fn base(&mut self) -> Result<Scenario> {
        self.used.push("base");
        match self.values.get("base").map(String::as_str) {
            None | Some("bell") => {
                let parties = self.count("parties", 2)?;
                let settings = self.count("settings", 2)?;
                let outcomes = self.count("outcomes", 2)?;
                bell(parties, settings, outcomes)
            }
            Some("triangle") => Ok(triangle()),
            Some(v) => Err(param_error("base", format!("expected bell or triangle, got {v:?}"))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().find(|k| !self.used.contains(&k.as_str())) {
            Some(k) => Err(param_error(k, "not accepted by this generator")),
            None => Ok(()),
        }
    }
}

/// Runs a registered generator.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    let mut p = Params {
        values: &spec.parameters,
        used: Vec::new(),
    };
    let out = match spec.name.as_str() {
        "bell" => {
            let parties = p.count("parties", 2)?;
            let settings = p.count("settings", 2)?;
            let outcomes = p.count("outcomes", 2)?;
            Generated::Scenario(bell(parties, settings, outcomes)?)
        }
        "single-context" => {
            let measurements = p.count("measurements", 2)?;
            let outcomes = p.count("outcomes", 2)?;
            Generated::Scenario(single_context(measurements, outcomes)?)
        }
        "triangle" => Generated::Scenario(triangle()),
        "pr-box" => Generated::Empirical(pr_box()),
        "triangle-anticorrelated" => Generated::Empirical(triangle_anticorrelated()),
        "section3" => Generated::General(section3_counterexample()),
        "random-ns" => {
            let sc = p.base()?;
            let seed = p.seed()?;
            let perturb = p.flag("perturb", true)?;
            Generated::Empirical(random_ns_model_with(&sc, seed, RandomNsOptions { perturb })?)
        }
        "random-signalling" => {
            let sc = p.base()?;
            let seed = p.seed()?;
            Generated::Empirical(random_signalling_model(&sc, seed)?.model)
        }
        "random-schv" => {
            let sc = p.base()?;
            let seed = p.seed()?;
            Generated::Schv(random_schv(&sc, seed)?)
        }
        other => {
            return Err(Error::UnknownGenerator {
                name: other.to_string(),
                registered: REGISTERED_GENERATORS.to_vec(),
            })
        }
    };
    p.finish()?;
    Ok(out)
}
