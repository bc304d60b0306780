//! Rebuilding a full no-signalling table from its boundary values.
//!
//! The boundary of a table is the set of values `e_V(s)` for partial contexts `V`
//! and sections `s` that never use the distinguished outcome. Every other value
//! follows from the marginal identity
//! `e_V(s[m ↦ d]) = e_{V∖m}(s|_{V∖m}) − Σ_{j ≠ d} e_V(s[m ↦ j])`,
//! applied in order of increasing number of distinguished outcomes.

use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::models::EmpiricalModel;
use crate::scenario::{is_subset, Scenario, Section, DISTINGUISHED_OUTCOME};
use std::collections::BTreeMap;

/// Values `e_V(s)` keyed by section; the section's domain is `V`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialTable {
    values: BTreeMap<Section, Rational>,
}

impl PartialTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, section: Section, value: Rational) {
        self.values.insert(section, value);
    }

    pub fn get(&self, section: &Section) -> Option<&Rational> {
        self.values.get(section)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Section, &Rational)> {
        self.values.iter()
    }
}

/// Boundary values of `e`: `e_V(s)` for every partial context `V` and every
/// section over `V` avoiding the distinguished outcome. `e_V` is the marginal of
/// the first context containing `V`.
pub fn boundary_data(e: &EmpiricalModel) -> Result<PartialTable> {
    let sc = e.scenario();
    let mut table = PartialTable::new();
    for v in sc.partial_contexts() {
        let context = sc
            .cover()
            .iter()
            .position(|c| is_subset(&v, c))
            .expect("partial contexts lie in some context");
        for s in sc.bounded_sections(&v, 0)? {
            let value = e.marginal(context, &s);
            table.insert(s, value);
        }
    }
    Ok(table)
}

/// Extends boundary values to `e_V(s)` for every partial context `V` and every
/// section over it.
///
/// The recursion always produces a value; whether the result is a consistent
/// table is for the caller to compare. Missing boundary entries are an error.
pub fn reconstruct_from_boundary(scenario: &Scenario, boundary: &PartialTable) -> Result<PartialTable> {
    let mut by_level: Vec<Vec<Section>> = Vec::new();
    for v in scenario.partial_contexts() {
        for s in scenario.sections(&v) {
            let k = s.count_outcome(DISTINGUISHED_OUTCOME);
            if by_level.len() <= k {
                by_level.resize(k + 1, Vec::new());
            }
            by_level[k].push(s);
        }
    }

    let mut out = PartialTable::new();
    for s in by_level.first().into_iter().flatten() {
        let value = boundary
            .get(s)
            .ok_or_else(|| Error::MissingBoundaryValue(scenario.format_section(s)))?;
        out.insert(s.clone(), value.clone());
    }
    for level in by_level.iter().skip(1) {
        for s in level {
            let (m, _) = s
                .iter()
                .find(|&(_, o)| o == DISTINGUISHED_OUTCOME)
                .expect("level >= 1 has a distinguished outcome");
            let smaller: Vec<usize> = s.domain().iter().copied().filter(|&x| x != m).collect();
            let mut value = out.values[&s.restrict(&smaller)].clone();
            for j in 0..scenario.num_outcomes() {
                if j != DISTINGUISHED_OUTCOME {
                    value -= &out.values[&s.override_at(scenario, m, j)?];
                }
            }
            out.insert(s.clone(), value);
        }
    }
    Ok(out)
}
