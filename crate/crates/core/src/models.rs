//! Empirical tables and hidden-variable models over a [`Scenario`].
//!
//! All models store a dense weight vector whose index layout is fixed by the
//! scenario:
//!
//! * empirical tables are indexed by atomic event (see [`Scenario::event_index`]);
//! * canonical models by `global_index * num_contexts + context`;
//! * general models by `event_index * num_hidden + hidden`.

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::scenario::{GlobalAssignment, Scenario, Section};
use num::{One, Signed, Zero};

/// A finitely supported signed measure of total mass 1 on an indexed carrier.
///
/// The carrier is implied by whoever owns the distribution; the distribution
/// itself only knows its length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDist {
    weights: Vec<Rational>,
}

impl SignedDist {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::MassNotOne { total });
        }
        Ok(SignedDist { weights })
    }

    /// Like [`SignedDist::new`], but additionally requires every weight to be `>= 0`.
    pub fn new_nonneg(weights: Vec<Rational>) -> Result<Self> {
        if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| w.is_negative()) {
            return Err(Error::NegativeWeight {
                index,
                weight: w.clone(),
            });
        }
        SignedDist::new(weights)
    }

    pub fn point_mass(len: usize, index: usize) -> Self {
        let mut weights = vec![Rational::zero(); len];
        weights[index] = Rational::one();
        SignedDist { weights }
    }

    pub fn uniform(len: usize) -> Self {
        let w = Rational::new(1.into(), len.into());
        SignedDist {
            weights: vec![w; len],
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.weights
    }

    pub fn get(&self, index: usize) -> &Rational {
        &self.weights[index]
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_nonneg(&self) -> bool {
        self.weights.iter().all(|w| !w.is_negative())
    }

    /// Total negative mass.
    pub fn negativity(&self) -> Rational {
        self.weights
            .iter()
            .filter(|w| w.is_negative())
            .map(|w| -w.clone())
            .sum()
    }
}

fn check_len(op: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            op,
            expected,
            found,
        })
    }
}

/// A probability table over atomic events with positive mass on every context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalModel {
    scenario: Scenario,
    table: SignedDist,
}

impl EmpiricalModel {
    pub fn new(scenario: Scenario, table: Vec<Rational>) -> Result<Self> {
        check_len("EmpiricalModel::new", scenario.num_events(), table.len())?;
        let table = SignedDist::new_nonneg(table)?;
        let model = EmpiricalModel { scenario, table };
        for c in 0..model.scenario.num_contexts() {
            if !model.context_mass(c).is_positive() {
                return Err(Error::ZeroContextMass {
                    context: model.scenario.labels(model.scenario.context(c)).join(","),
                });
            }
        }
        Ok(model)
    }

    /// Builds `e(U, s) = weight(U) * conditional(U, s)` from context weights and a
    /// conditional table in event order.
    pub fn from_conditionals(
        scenario: Scenario,
        context_weights: &[Rational],
        conditionals: &[Rational],
    ) -> Result<Self> {
        check_len(
            "EmpiricalModel::from_conditionals",
            scenario.num_contexts(),
            context_weights.len(),
        )?;
        check_len(
            "EmpiricalModel::from_conditionals",
            scenario.num_events(),
            conditionals.len(),
        )?;
        let table = (0..scenario.num_events())
            .map(|i| &context_weights[scenario.event_at(i).context] * &conditionals[i])
            .collect();
        EmpiricalModel::new(scenario, table)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &SignedDist {
        &self.table
    }

    pub fn weight(&self, event: usize) -> &Rational {
        self.table.get(event)
    }

    fn context_range(&self, context: usize) -> std::ops::Range<usize> {
        self.scenario.event_offset(context)..self.scenario.event_offset(context + 1)
    }

    /// `e(U)`.
    pub fn context_mass(&self, context: usize) -> Rational {
        self.table.weights()[self.context_range(context)].iter().sum()
    }

    /// The distribution of contexts, `U ↦ e(U)`.
    pub fn context_distribution(&self) -> SignedDist {
        SignedDist {
            weights: (0..self.scenario.num_contexts())
                .map(|c| self.context_mass(c))
                .collect(),
        }
    }

    /// `e_U`, the conditional distribution over sections of `context`.
    pub fn conditional(&self, context: usize) -> SignedDist {
        let mass = self.context_mass(context);
        SignedDist {
            weights: self.table.weights()[self.context_range(context)]
                .iter()
                .map(|w| w / &mass)
                .collect(),
        }
    }

    /// `e_U(s)` for every atomic event, in event order.
    pub fn conditional_vector(&self) -> Vec<Rational> {
        (0..self.scenario.num_contexts())
            .flat_map(|c| self.conditional(c).into_weights())
            .collect()
    }

    /// `Σ e_U(s')` over sections `s'` of `context` extending `section`.
    ///
    /// `section`'s domain must be contained in the context.
    pub fn marginal(&self, context: usize, section: &Section) -> Rational {
        let mass = self.context_mass(context);
        let total: Rational = self
            .scenario
            .sections(self.scenario.context(context))
            .zip(&self.table.weights()[self.context_range(context)])
            .filter(|(s, _)| section.iter().all(|(m, v)| s.get(m) == Some(v)))
            .map(|(_, w)| w.clone())
            .sum();
        total / mass
    }
}

/// A signed canonical hidden-variable model: a signed measure on global
/// assignments × contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchvModel {
    scenario: Scenario,
    weights: SignedDist,
}

impl SchvModel {
    pub fn new(scenario: Scenario, weights: Vec<Rational>) -> Result<Self> {
        let p = scenario.num_globals()?;
        check_len("SchvModel::new", p * scenario.num_contexts(), weights.len())?;
        Ok(SchvModel {
            scenario,
            weights: SignedDist::new(weights)?,
        })
    }

    /// The product model `m(ω, U) = hidden(ω) · contexts(U)`.
    pub fn product(scenario: Scenario, hidden: &SignedDist, contexts: &SignedDist) -> Result<Self> {
        let p = scenario.num_globals()?;
        check_len("SchvModel::product", p, hidden.len())?;
        check_len("SchvModel::product", scenario.num_contexts(), contexts.len())?;
        let weights = hidden
            .weights()
            .iter()
            .flat_map(|h| contexts.weights().iter().map(move |c| h * c))
            .collect();
        SchvModel::new(scenario, weights)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn weights(&self) -> &SignedDist {
        &self.weights
    }

    pub fn num_globals(&self) -> usize {
        self.weights.len() / self.scenario.num_contexts().max(1)
    }

    pub fn weight(&self, global: usize, context: usize) -> &Rational {
        self.weights.get(global * self.scenario.num_contexts() + context)
    }

    /// A probabilistic canonical model is one with no negative weight.
    pub fn is_pchv(&self) -> bool {
        self.weights.is_nonneg()
    }

    /// `m̂(U, s) = Σ_{ω|_U = s} m(ω, U)`, in event order.
    pub fn marginalize(&self) -> SignedDist {
        let sc = &self.scenario;
        let k = sc.num_contexts();
        let mut out = vec![Rational::zero(); sc.num_events()];
        for (g, omega) in (0..self.num_globals()).zip(globals_iter(sc)) {
            for c in 0..k {
                let w = self.weight(g, c);
                if w.is_zero() {
                    continue;
                }
                out[sc.event_index(c, &omega.restrict(sc.context(c)))] += w;
            }
        }
        SignedDist { weights: out }
    }

    /// The marginals `(m_Ω, m_𝒰)`.
    pub fn marginals(&self) -> (SignedDist, SignedDist) {
        let k = self.scenario.num_contexts();
        let mut hidden = vec![Rational::zero(); self.num_globals()];
        let mut contexts = vec![Rational::zero(); k];
        for (i, w) in self.weights.weights().iter().enumerate() {
            hidden[i / k] += w;
            contexts[i % k] += w;
        }
        (SignedDist { weights: hidden }, SignedDist { weights: contexts })
    }

    /// True iff the marginalization equals `e`'s table exactly.
    pub fn realizes(&self, e: &EmpiricalModel) -> bool {
        self.scenario == *e.scenario() && self.marginalize() == *e.table()
    }

    /// The empirical model `m̂`, when it is one (nonnegative, positive context masses).
    pub fn to_empirical(&self) -> Result<EmpiricalModel> {
        EmpiricalModel::new(self.scenario.clone(), self.marginalize().into_weights())
    }

    /// The general hidden-variable model `h_m` with hidden set Ω:
    /// `h_m(U, s, ω) = m(ω, U)` when `ω|_U = s`, else 0.
    pub fn embed_canonical(&self) -> GeneralHvModel {
        let sc = &self.scenario;
        let p = self.num_globals();
        let mut weights = vec![Rational::zero(); sc.num_events() * p];
        let mut hidden = Vec::with_capacity(p);
        for (g, omega) in (0..p).zip(globals_iter(sc)) {
            hidden.push(sc.format_global(&omega));
            for c in 0..sc.num_contexts() {
                let e = sc.event_index(c, &omega.restrict(sc.context(c)));
                weights[e * p + g] = self.weight(g, c).clone();
            }
        }
        GeneralHvModel {
            scenario: sc.clone(),
            hidden,
            weights: SignedDist { weights },
        }
    }
}

/// Global assignments of a scenario in index order, without a cap check. Callers
/// hold a model whose size already passed the cap.
fn globals_iter(sc: &Scenario) -> impl Iterator<Item = GlobalAssignment> + '_ {
    let n = sc.num_measurements();
    let l = sc.num_outcomes();
    let mut values = vec![0usize; n];
    let mut first = true;
    std::iter::from_fn(move || {
        if first {
            first = false;
            return Some(GlobalAssignment::new(values.clone()));
        }
        for slot in values.iter_mut().rev() {
            *slot += 1;
            if *slot < l {
                return Some(GlobalAssignment::new(values.clone()));
            }
            *slot = 0;
        }
        None
    })
}

/// A general hidden-variable model: a signed measure on atomic events × Λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralHvModel {
    scenario: Scenario,
    hidden: Vec<String>,
    weights: SignedDist,
}

impl GeneralHvModel {
    pub fn new(scenario: Scenario, hidden: Vec<String>, weights: Vec<Rational>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for h in &hidden {
            if !seen.insert(h) {
                return Err(Error::DuplicateLabel {
                    kind: "hidden value",
                    label: h.clone(),
                });
            }
        }
        check_len(
            "GeneralHvModel::new",
            scenario.num_events() * hidden.len(),
            weights.len(),
        )?;
        Ok(GeneralHvModel {
            scenario,
            hidden,
            weights: SignedDist::new(weights)?,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn hidden(&self) -> &[String] {
        &self.hidden
    }

    pub fn num_hidden(&self) -> usize {
        self.hidden.len()
    }

    pub fn weights(&self) -> &SignedDist {
        &self.weights
    }

    pub fn weight(&self, event: usize, hidden: usize) -> &Rational {
        self.weights.get(event * self.hidden.len() + hidden)
    }

    pub fn hidden_index(&self, label: &str) -> Result<usize> {
        self.hidden
            .iter()
            .position(|h| h == label)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "hidden value",
                label: label.to_string(),
            })
    }

    /// `h_Λ`.
    pub fn hidden_marginal(&self) -> SignedDist {
        let k = self.hidden.len();
        let mut out = vec![Rational::zero(); k];
        for (i, w) in self.weights.weights().iter().enumerate() {
            out[i % k] += w;
        }
        SignedDist { weights: out }
    }

    /// `Σ_λ h(U, s, λ)`, in event order.
    pub fn event_marginal(&self) -> SignedDist {
        let k = self.hidden.len();
        SignedDist {
            weights: self
                .weights
                .weights()
                .chunks(k.max(1))
                .map(|chunk| chunk.iter().sum())
                .collect(),
        }
    }

    /// `Σ_s h(U, s, λ)` for every context and hidden value, indexed
    /// `context * num_hidden + λ`.
    pub fn context_hidden_marginal(&self) -> Vec<Rational> {
        let sc = &self.scenario;
        let k = self.hidden.len();
        let mut out = vec![Rational::zero(); sc.num_contexts() * k];
        for c in 0..sc.num_contexts() {
            for e in sc.event_offset(c)..sc.event_offset(c + 1) {
                for h in 0..k {
                    out[c * k + h] += self.weight(e, h);
                }
            }
        }
        out
    }

    /// `h^λ(U, s) = h(U, s, λ) / h_Λ(λ)`.
    pub fn conditional(&self, hidden: usize) -> Result<SignedDist> {
        let mass = self.hidden_marginal().get(hidden).clone();
        if mass.is_zero() {
            return Err(Error::ConditionalUndefined {
                lambda: self.hidden[hidden].clone(),
            });
        }
        Ok(SignedDist {
            weights: (0..self.scenario.num_events())
                .map(|e| self.weight(e, hidden) / &mass)
                .collect(),
        })
    }

    /// `h_Λ` together with `h^λ` for every λ; fails on the first λ of zero mass.
    pub fn conditionals(&self) -> Result<(SignedDist, Vec<SignedDist>)> {
        let per_hidden = (0..self.hidden.len())
            .map(|h| self.conditional(h))
            .collect::<Result<Vec<_>>>()?;
        Ok((self.hidden_marginal(), per_hidden))
    }

    /// True iff `Σ_λ h(U, s, λ) = e(U, s)` for every atomic event.
    pub fn realizes(&self, e: &EmpiricalModel) -> bool {
        self.scenario == *e.scenario() && self.event_marginal() == *e.table()
    }

    pub fn to_empirical(&self) -> Result<EmpiricalModel> {
        EmpiricalModel::new(self.scenario.clone(), self.event_marginal().into_weights())
    }
}
