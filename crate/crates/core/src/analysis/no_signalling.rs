use crate::exactmath::Rational;
use crate::models::EmpiricalModel;
use crate::scenario::{intersect, Section};

/// One disagreement between the marginals of two overlapping contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsViolation {
    pub first: usize,
    pub second: usize,
    /// Section over the intersection of the two contexts.
    pub section: Section,
    /// Marginal of `first`'s conditional at `section`.
    pub lhs: Rational,
    /// Marginal of `second`'s conditional at `section`.
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NsReport {
    pub violations: Vec<NsViolation>,
}

impl NsReport {
    pub fn is_no_signalling(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares the marginals of every pair of overlapping contexts on their
/// intersection. Violations come in (first context, second context, section) order.
///
/// Disjoint pairs are skipped: both sides are the total mass 1.
pub fn check_no_signalling(e: &EmpiricalModel) -> NsReport {
    let sc = e.scenario();
    let mut violations = Vec::new();
    for i in 0..sc.num_contexts() {
        let cond_i = e.conditional(i);
        for j in i + 1..sc.num_contexts() {
            let common = intersect(sc.context(i), sc.context(j));
            if common.is_empty() {
                continue;
            }
            let cond_j = e.conditional(j);
            let lhs = marginalize_onto(e, i, &cond_i, &common);
            let rhs = marginalize_onto(e, j, &cond_j, &common);
            for ((section, l), r) in sc.sections(&common).zip(lhs).zip(rhs) {
                if l != r {
                    violations.push(NsViolation {
                        first: i,
                        second: j,
                        section,
                        lhs: l,
                        rhs: r,
                    });
                }
            }
        }
    }
    NsReport { violations }
}

fn marginalize_onto(
    e: &EmpiricalModel,
    context: usize,
    conditional: &crate::models::SignedDist,
    subset: &[usize],
) -> Vec<Rational> {
    let sc = e.scenario();
    let mut out = vec![Rational::from_integer(0.into()); sc.num_sections(subset.len())];
    for (s, w) in sc.sections(sc.context(context)).zip(conditional.weights()) {
        out[sc.section_index(&s.restrict(subset))] += w;
    }
    out
}
