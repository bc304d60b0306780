//! Measurement covers, sections, and the combinatorial sets built from them.
//!
//! Measurements and outcomes are referred to by their position in the scenario's
//! declaration order. A [`Section`] stores its domain as ascending measurement
//! indices with one outcome index per measurement; all enumerations are
//! lexicographic with the earliest-declared measurement most significant and
//! outcomes in declaration order. The first declared outcome is the distinguished
//! outcome used by the boundary-section machinery.

use crate::error::{Error, Result};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Default limit on the number of global assignments any operation may enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 1 << 20;

/// Index of the distinguished outcome.
pub const DISTINGUISHED_OUTCOME: usize = 0;

/// A way in which a cover fails to be a well-formed measurement scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// One context is strictly contained in another.
    NotAntichain { smaller: Vec<String>, larger: Vec<String> },
    DuplicateContext { context: Vec<String> },
    EmptyContext { index: usize },
    UncoveredMeasurement { label: String },
    TooFewOutcomes { count: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAntichain { smaller, larger } => write!(
                f,
                "cover is not an antichain: {{{}}} is contained in {{{}}}",
                smaller.join(","),
                larger.join(",")
            ),
            Violation::DuplicateContext { context } => {
                write!(f, "context {{{}}} appears more than once", context.join(","))
            }
            Violation::EmptyContext { index } => write!(f, "context #{index} is empty"),
            Violation::UncoveredMeasurement { label } => {
                write!(f, "measurement {label:?} is not in any context")
            }
            Violation::TooFewOutcomes { count } => {
                write!(f, "at least 2 outcomes are required, found {count}")
            }
        }
    }
}

/// A partial assignment of outcomes to a set of measurements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Section {
    domain: Vec<usize>,
    values: Vec<usize>,
}

impl Section {
    pub fn empty() -> Self {
        Section {
            domain: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds a section from `(measurement, outcome)` pairs in any order. A repeated
    /// measurement keeps its last outcome.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let map: std::collections::BTreeMap<usize, usize> = pairs.into_iter().collect();
        Section {
            domain: map.keys().copied().collect(),
            values: map.values().copied().collect(),
        }
    }

    /// `domain` must be ascending and the same length as `values`.
    pub(crate) fn from_parts(domain: Vec<usize>, values: Vec<usize>) -> Self {
        debug_assert_eq!(domain.len(), values.len());
        debug_assert!(domain.windows(2).all(|w| w[0] < w[1]));
        Section { domain, values }
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn get(&self, measurement: usize) -> Option<usize> {
        self.domain
            .binary_search(&measurement)
            .ok()
            .map(|k| self.values[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.domain.iter().copied().zip(self.values.iter().copied())
    }

    /// Restriction to `subset ∩ domain`.
    pub fn restrict(&self, subset: &[usize]) -> Section {
        let (domain, values) = self
            .iter()
            .filter(|(m, _)| subset.binary_search(m).is_ok())
            .unzip();
        Section { domain, values }
    }

    /// Copy of this section with `measurement` reassigned to `outcome`.
    pub fn override_at(&self, scenario: &Scenario, measurement: usize, outcome: usize) -> Result<Section> {
        let Ok(k) = self.domain.binary_search(&measurement) else {
            return Err(Error::NotInDomain {
                measurement: scenario
                    .measurements
                    .get(measurement)
                    .cloned()
                    .unwrap_or_else(|| format!("#{measurement}")),
            });
        };
        if outcome >= scenario.num_outcomes() {
            return Err(Error::UnknownLabel {
                kind: "outcome",
                label: format!("#{outcome}"),
            });
        }
        let mut out = self.clone();
        out.values[k] = outcome;
        Ok(out)
    }

    pub fn count_outcome(&self, outcome: usize) -> usize {
        self.values.iter().filter(|&&v| v == outcome).count()
    }
}

/// A total assignment of outcomes to every measurement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlobalAssignment(Vec<usize>);

impl GlobalAssignment {
    pub fn new(values: Vec<usize>) -> Self {
        GlobalAssignment(values)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn restrict(&self, domain: &[usize]) -> Section {
        Section::from_parts(domain.to_vec(), domain.iter().map(|&m| self.0[m]).collect())
    }

    pub fn as_section(&self) -> Section {
        Section::from_parts((0..self.0.len()).collect(), self.0.clone())
    }

    pub fn agrees_with(&self, section: &Section) -> bool {
        section.iter().all(|(m, v)| self.0[m] == v)
    }
}

/// An atomic event: a context from the cover with a section over exactly that
/// context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomicEvent {
    pub context: usize,
    pub section: Section,
}

/// A measurement cover together with an outcome set.
#[derive(Debug, Clone)]
pub struct Scenario {
    measurements: Vec<String>,
    cover: Vec<Vec<usize>>,
    outcomes: Vec<String>,
    event_offsets: Vec<usize>,
    enumeration_cap: usize,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.measurements == other.measurements
            && self.cover == other.cover
            && self.outcomes == other.outcomes
    }
}

impl Eq for Scenario {}

fn resolve_labels(kind: &'static str, labels: Vec<String>) -> Result<Vec<String>> {
    let mut seen = HashSet::new();
    for l in &labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel {
                kind,
                label: l.clone(),
            });
        }
    }
    Ok(labels)
}

impl Scenario {
    /// Builds and validates a scenario.
    pub fn new<S: Into<String>>(
        measurements: impl IntoIterator<Item = S>,
        cover: impl IntoIterator<Item = Vec<S>>,
        outcomes: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let scenario = Self::new_unchecked(measurements, cover, outcomes)?;
        scenario.validate().map_err(Error::InvalidScenario)?;
        Ok(scenario)
    }

    /// Resolves labels without checking the cover invariants; see [`Scenario::validate`].
    pub fn new_unchecked<S: Into<String>>(
        measurements: impl IntoIterator<Item = S>,
        cover: impl IntoIterator<Item = Vec<S>>,
        outcomes: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let measurements =
            resolve_labels("measurement", measurements.into_iter().map(Into::into).collect())?;
        let outcomes = resolve_labels("outcome", outcomes.into_iter().map(Into::into).collect())?;
        let mut contexts = Vec::new();
        for context in cover {
            let mut indices = Vec::new();
            for label in context {
                let label: String = label.into();
                let idx = measurements
                    .iter()
                    .position(|m| *m == label)
                    .ok_or_else(|| Error::UnknownLabel {
                        kind: "measurement",
                        label: label.clone(),
                    })?;
                if indices.contains(&idx) {
                    return Err(Error::DuplicateLabel {
                        kind: "context member",
                        label,
                    });
                }
                indices.push(idx);
            }
            indices.sort_unstable();
            contexts.push(indices);
        }
        let l = outcomes.len();
        let mut event_offsets = vec![0usize];
        for c in &contexts {
            let size = pow_saturating(l, c.len());
            event_offsets.push(event_offsets.last().unwrap().saturating_add(size));
        }
        Ok(Scenario {
            measurements,
            cover: contexts,
            outcomes,
            event_offsets,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    pub fn with_enumeration_cap(mut self, cap: usize) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn enumeration_cap(&self) -> usize {
        self.enumeration_cap
    }

    /// Lists every violated scenario invariant.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        if self.outcomes.len() < 2 {
            violations.push(Violation::TooFewOutcomes {
                count: self.outcomes.len(),
            });
        }
        for (i, c) in self.cover.iter().enumerate() {
            if c.is_empty() {
                violations.push(Violation::EmptyContext { index: i });
            }
        }
        for i in 0..self.cover.len() {
            for j in 0..self.cover.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (&self.cover[i], &self.cover[j]);
                if a == b {
                    if i < j {
                        violations.push(Violation::DuplicateContext {
                            context: self.labels(a),
                        });
                    }
                } else if !a.is_empty() && is_subset(a, b) {
                    violations.push(Violation::NotAntichain {
                        smaller: self.labels(a),
                        larger: self.labels(b),
                    });
                }
            }
        }
        for (m, label) in self.measurements.iter().enumerate() {
            if !self.cover.iter().any(|c| c.contains(&m)) {
                violations.push(Violation::UncoveredMeasurement {
                    label: label.clone(),
                });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn measurements(&self) -> &[String] {
        &self.measurements
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn cover(&self) -> &[Vec<usize>] {
        &self.cover
    }

    pub fn context(&self, index: usize) -> &[usize] {
        &self.cover[index]
    }

    pub fn num_measurements(&self) -> usize {
        self.measurements.len()
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn num_contexts(&self) -> usize {
        self.cover.len()
    }

    pub fn measurement_index(&self, label: &str) -> Result<usize> {
        self.measurements
            .iter()
            .position(|m| m == label)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "measurement",
                label: label.to_string(),
            })
    }

    pub fn outcome_index(&self, label: &str) -> Result<usize> {
        self.outcomes
            .iter()
            .position(|o| o == label)
            .ok_or_else(|| Error::UnknownLabel {
                kind: "outcome",
                label: label.to_string(),
            })
    }

    /// Ascending measurement indices for a list of labels.
    pub fn measurement_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = labels
            .iter()
            .map(|l| self.measurement_index(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Index of the context equal (as a set) to `measurements`.
    pub fn context_index(&self, measurements: &[usize]) -> Option<usize> {
        let mut sorted = measurements.to_vec();
        sorted.sort_unstable();
        self.cover.iter().position(|c| *c == sorted)
    }

    /// Builds a section from `(measurement label, outcome label)` pairs.
    pub fn section<S: AsRef<str>>(&self, pairs: &[(S, S)]) -> Result<Section> {
        let mut resolved = Vec::with_capacity(pairs.len());
        for (m, o) in pairs {
            resolved.push((self.measurement_index(m.as_ref())?, self.outcome_index(o.as_ref())?));
        }
        Ok(Section::from_pairs(resolved))
    }

    pub fn labels(&self, measurements: &[usize]) -> Vec<String> {
        measurements
            .iter()
            .map(|&m| self.measurements[m].clone())
            .collect()
    }

    /// Human-readable `{a=0, b=1}` rendering of a section.
    pub fn format_section(&self, section: &Section) -> String {
        let parts: Vec<String> = section
            .iter()
            .map(|(m, v)| format!("{}={}", self.measurements[m], self.outcomes[v]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    pub fn format_global(&self, global: &GlobalAssignment) -> String {
        self.format_section(&global.as_section())
    }

    /// `l^|X|`, saturating.
    pub fn num_globals_u128(&self) -> u128 {
        (self.num_outcomes() as u128)
            .checked_pow(self.num_measurements() as u32)
            .unwrap_or(u128::MAX)
    }

    /// `l^|X|`, or an error when it exceeds the enumeration cap.
    pub fn num_globals(&self) -> Result<usize> {
        self.check_cap(self.num_globals_u128())
    }

    fn check_cap(&self, required: u128) -> Result<usize> {
        if required > self.enumeration_cap as u128 {
            Err(Error::EnumerationCap {
                required,
                cap: self.enumeration_cap,
            })
        } else {
            Ok(required as usize)
        }
    }

    /// All global assignments, in lexicographic order.
    pub fn enumerate_globals(&self) -> Result<Vec<GlobalAssignment>> {
        let p = self.num_globals()?;
        let n = self.num_measurements();
        Ok((0..p).map(|i| self.global_at(i, n)).collect())
    }

    fn global_at(&self, index: usize, n: usize) -> GlobalAssignment {
        GlobalAssignment(decode(index, n, self.num_outcomes()))
    }

    pub fn global_index(&self, global: &GlobalAssignment) -> usize {
        encode(&global.0, self.num_outcomes())
    }

    /// Global assignments consistent with `section`, in lexicographic order. There
    /// are `l^(|X| - |domain|)` of them.
    pub fn consistent_globals(&self, section: &Section) -> Result<Vec<GlobalAssignment>> {
        let n = self.num_measurements();
        let l = self.num_outcomes();
        if section.domain.iter().any(|&m| m >= n) || section.values.iter().any(|&v| v >= l) {
            return Err(Error::UnknownLabel {
                kind: "measurement or outcome",
                label: format!("{section:?}"),
            });
        }
        let free: Vec<usize> = (0..n).filter(|m| section.get(*m).is_none()).collect();
        let count = self.check_cap(
            (l as u128)
                .checked_pow(free.len() as u32)
                .unwrap_or(u128::MAX),
        )?;
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let free_values = decode(k, free.len(), l);
            let mut values = vec![0; n];
            for (m, v) in section.iter() {
                values[m] = v;
            }
            for (&m, v) in free.iter().zip(free_values) {
                values[m] = v;
            }
            out.push(GlobalAssignment(values));
        }
        Ok(out)
    }

    /// Number of sections over a domain of the given size.
    pub fn num_sections(&self, domain_len: usize) -> usize {
        pow_saturating(self.num_outcomes(), domain_len)
    }

    /// All sections over `domain` (ascending measurement indices), lexicographic.
    pub fn sections<'a>(&'a self, domain: &'a [usize]) -> impl Iterator<Item = Section> + 'a {
        let l = self.num_outcomes();
        (0..self.num_sections(domain.len()))
            .map(move |k| Section::from_parts(domain.to_vec(), decode(k, domain.len(), l)))
    }

    /// Position of `section` in the lexicographic enumeration of its domain.
    pub fn section_index(&self, section: &Section) -> usize {
        encode(&section.values, self.num_outcomes())
    }

    pub fn num_events(&self) -> usize {
        *self.event_offsets.last().unwrap()
    }

    /// Offset of the first event of `context` in the event ordering.
    pub fn event_offset(&self, context: usize) -> usize {
        self.event_offsets[context]
    }

    /// Index of the atomic event `(context, section)`; the section's domain must be
    /// the context.
    pub fn event_index(&self, context: usize, section: &Section) -> usize {
        debug_assert_eq!(section.domain(), self.context(context));
        self.event_offsets[context] + self.section_index(section)
    }

    /// The atomic event with the given index.
    pub fn event_at(&self, index: usize) -> AtomicEvent {
        let context = self.event_offsets.partition_point(|&o| o <= index) - 1;
        let domain = self.cover[context].clone();
        let values = decode(index - self.event_offsets[context], domain.len(), self.num_outcomes());
        AtomicEvent {
            context,
            section: Section::from_parts(domain, values),
        }
    }

    /// All atomic events: contexts in cover order, sections lexicographic.
    pub fn events(&self) -> Vec<AtomicEvent> {
        (0..self.num_events()).map(|i| self.event_at(i)).collect()
    }

    /// Every subset of every context, including the empty set, without duplicates.
    /// Ordered by size, then lexicographically.
    pub fn partial_contexts(&self) -> Vec<Vec<usize>> {
        let mut all = BTreeSet::new();
        for c in &self.cover {
            for mask in 0u64..(1u64 << c.len()) {
                let subset: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &m)| m)
                    .collect();
                all.insert((subset.len(), subset));
            }
        }
        all.into_iter().map(|(_, s)| s).collect()
    }

    pub fn is_partial_context(&self, set: &[usize]) -> bool {
        self.cover.iter().any(|c| is_subset(set, c))
    }

    /// Sections over `set` assigning the distinguished outcome to at most
    /// `max_distinguished` measurements.
    pub fn bounded_sections(&self, set: &[usize], max_distinguished: usize) -> Result<Vec<Section>> {
        let mut domain = set.to_vec();
        domain.sort_unstable();
        domain.dedup();
        if !self.is_partial_context(&domain) {
            return Err(Error::NotPartialContext(self.labels(&domain)));
        }
        Ok(self
            .sections(&domain)
            .filter(|s| s.count_outcome(DISTINGUISHED_OUTCOME) <= max_distinguished)
            .collect())
    }
}

/// `a ⊆ b` for ascending index lists.
pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub(crate) fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

fn pow_saturating(base: usize, exp: usize) -> usize {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .unwrap_or(usize::MAX)
}

fn decode(mut index: usize, len: usize, base: usize) -> Vec<usize> {
    let mut values = vec![0; len];
    for slot in values.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    values
}

fn encode(values: &[usize], base: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * base + v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn chsh() -> Scenario {
        generators::bell(2, 2, 2).unwrap()
    }

    #[test]
    fn validate_reports_each_violation() {
        assert!(chsh().validate().is_ok());

        let s = Scenario::new_unchecked(["a", "b"], [vec!["a"], vec!["a", "b"]], ["0", "1"]).unwrap();
        assert_eq!(
            s.validate().unwrap_err(),
            vec![Violation::NotAntichain {
                smaller: vec!["a".into()],
                larger: vec!["a".into(), "b".into()],
            }]
        );

        let s = Scenario::new_unchecked(["a", "b"], [vec!["a"]], ["0", "1"]).unwrap();
        assert_eq!(
            s.validate().unwrap_err(),
            vec![Violation::UncoveredMeasurement { label: "b".into() }]
        );

        let s = Scenario::new_unchecked(["a"], [vec!["a"], vec!["a"]], ["0"]).unwrap();
        let v = s.validate().unwrap_err();
        assert!(v.contains(&Violation::TooFewOutcomes { count: 1 }));
        assert!(v.contains(&Violation::DuplicateContext {
            context: vec!["a".into()]
        }));

        let s = Scenario::new_unchecked(["a"], [vec!["a"], vec![]], ["0", "1"]).unwrap();
        assert!(s
            .validate()
            .unwrap_err()
            .contains(&Violation::EmptyContext { index: 1 }));
    }

    #[test]
    fn label_errors() {
        assert!(matches!(
            Scenario::new(["a"], [vec!["z"]], ["0", "1"]),
            Err(Error::UnknownLabel { .. })
        ));
        assert!(matches!(
            Scenario::new(["a", "a"], [vec!["a"]], ["0", "1"]),
            Err(Error::DuplicateLabel { .. })
        ));
        assert!(matches!(
            Scenario::new(["a", "b"], [vec!["a"]], ["0", "1"]),
            Err(Error::InvalidScenario(_))
        ));
    }

    #[test]
    fn global_enumeration() {
        let s = Scenario::new(["a"], [vec!["a"]], ["0", "1"]).unwrap();
        let g = s.enumerate_globals().unwrap();
        assert_eq!(g, vec![GlobalAssignment::new(vec![0]), GlobalAssignment::new(vec![1])]);
        assert_eq!(chsh().enumerate_globals().unwrap().len(), 16);
        let s = Scenario::new(["a", "b", "c"], [vec!["a", "b", "c"]], ["0", "1", "2"]).unwrap();
        let g = s.enumerate_globals().unwrap();
        assert_eq!(g.len(), 27);
        for (i, omega) in g.iter().enumerate() {
            assert_eq!(s.global_index(omega), i);
        }
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let s = chsh().with_enumeration_cap(15);
        assert_eq!(
            s.enumerate_globals().unwrap_err(),
            Error::EnumerationCap { required: 16, cap: 15 }
        );
        assert!(chsh().with_enumeration_cap(16).enumerate_globals().is_ok());
    }

    #[test]
    fn consistent_globals_sizes() {
        let s = chsh();
        assert_eq!(s.consistent_globals(&Section::empty()).unwrap().len(), 16);
        let sec = s.section(&[("a0", "0"), ("b0", "1")]).unwrap();
        let globals = s.consistent_globals(&sec).unwrap();
        assert_eq!(globals.len(), 4);
        assert!(globals.iter().all(|g| g.agrees_with(&sec)));
        let total = GlobalAssignment::new(vec![1, 0, 1, 1]);
        assert_eq!(s.consistent_globals(&total.as_section()).unwrap(), vec![total]);
    }

    #[test]
    fn consistent_globals_partition_omega() {
        for s in [chsh(), generators::triangle(), generators::bell(2, 2, 3).unwrap()] {
            let p = s.num_globals().unwrap();
            for c in 0..s.num_contexts() {
                let mut seen = vec![0u32; p];
                for sec in s.sections(s.context(c)) {
                    for g in s.consistent_globals(&sec).unwrap() {
                        seen[s.global_index(&g)] += 1;
                    }
                }
                assert!(seen.iter().all(|&k| k == 1));
            }
        }
    }

    #[test]
    fn partial_context_counts() {
        let s = chsh();
        let sigma = s.partial_contexts();
        assert_eq!(sigma.len(), 9);
        assert_eq!(sigma[0], Vec::<usize>::new());
        let s = Scenario::new(["a", "b", "c"], [vec!["a", "b", "c"]], ["0", "1"]).unwrap();
        assert_eq!(s.partial_contexts().len(), 8);
        assert_eq!(generators::triangle().partial_contexts().len(), 7);
    }

    #[test]
    fn partial_contexts_are_downward_closed() {
        for s in [chsh(), generators::triangle(), generators::bell(3, 2, 2).unwrap()] {
            let sigma: BTreeSet<Vec<usize>> = s.partial_contexts().into_iter().collect();
            for v in &sigma {
                for drop in 0..v.len() {
                    let mut w = v.clone();
                    w.remove(drop);
                    assert!(sigma.contains(&w));
                }
            }
        }
    }

    #[test]
    fn bounded_section_counts() {
        let s = chsh();
        let v = s.measurement_set(&["a0", "b0"]).unwrap();
        assert_eq!(s.bounded_sections(&v, 2).unwrap().len(), 4);
        let zero = s.bounded_sections(&v, 0).unwrap();
        assert_eq!(zero, vec![s.section(&[("a0", "1"), ("b0", "1")]).unwrap()]);

        let s = Scenario::new(["a", "b"], [vec!["a", "b"]], ["0", "1", "2"]).unwrap();
        assert_eq!(s.bounded_sections(&[0, 1], 0).unwrap().len(), 4);

        let not_partial = chsh().measurement_set(&["a0", "a1"]).unwrap();
        assert!(matches!(
            chsh().bounded_sections(&not_partial, 0),
            Err(Error::NotPartialContext(_))
        ));

        for s in [chsh(), generators::triangle(), generators::bell(2, 2, 3).unwrap()] {
            let l = s.num_outcomes();
            for v in s.partial_contexts() {
                let n = s.bounded_sections(&v, 0).unwrap().len();
                assert_eq!(n, (l - 1).pow(v.len() as u32));
            }
        }
    }

    #[test]
    fn override_semantics() {
        let s = Scenario::new(["a", "b"], [vec!["a", "b"]], ["0", "1", "2"]).unwrap();
        let sec = s.section(&[("a", "0"), ("b", "0")]).unwrap();
        assert_eq!(sec.override_at(&s, 0, 0).unwrap(), sec);
        assert_eq!(
            sec.override_at(&s, 0, 1).unwrap(),
            s.section(&[("a", "1"), ("b", "0")]).unwrap()
        );
        let twice = sec.override_at(&s, 0, 1).unwrap().override_at(&s, 0, 2).unwrap();
        assert_eq!(twice, sec.override_at(&s, 0, 2).unwrap());
        let partial = s.section(&[("a", "0")]).unwrap();
        assert_eq!(
            partial.override_at(&s, 1, 1).unwrap_err(),
            Error::NotInDomain { measurement: "b".into() }
        );
    }

    #[test]
    fn event_indexing_round_trips() {
        let s = generators::bell(2, 2, 3).unwrap();
        assert_eq!(s.num_events(), 36);
        for (i, ev) in s.events().iter().enumerate() {
            assert_eq!(s.event_index(ev.context, &ev.section), i);
        }
    }

    #[test]
    fn enumeration_is_stable() {
        assert_eq!(chsh().enumerate_globals().unwrap(), chsh().enumerate_globals().unwrap());
        assert_eq!(chsh().events(), chsh().events());
    }
}
