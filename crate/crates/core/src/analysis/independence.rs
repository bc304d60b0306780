use crate::exactmath::Rational;
use crate::models::{GeneralHvModel, SchvModel};
use crate::scenario::{intersect, Section};
use num::Zero;

/// First failure found by an independence check, in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceWitness {
    /// `m(ω, U) ≠ m_Ω(ω) · m_𝒰(U)` for a canonical model.
    Lambda {
        global: usize,
        context: usize,
        joint: Rational,
        product: Rational,
    },
    /// `h(U, λ) ≠ h_𝒰(U) · h_Λ(λ)` for a general model.
    GeneralLambda {
        context: usize,
        hidden: usize,
        joint: Rational,
        product: Rational,
    },
    /// `h(s | U, λ) ≠ h(s | V, λ)` for a section `s` over `U ∩ V`.
    Parameter {
        first: usize,
        second: usize,
        section: Section,
        hidden: usize,
        lhs: Rational,
        rhs: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub holds: bool,
    pub witness: Option<IndependenceWitness>,
    /// Comparisons skipped because a conditioning event had zero mass.
    pub vacuous: usize,
}

impl IndependenceReport {
    fn from_witness(witness: Option<IndependenceWitness>, vacuous: usize) -> Self {
        IndependenceReport {
            holds: witness.is_none(),
            witness,
            vacuous,
        }
    }
}

/// Checks that a canonical model factors as the product of its marginals.
pub fn check_lambda_independence(m: &SchvModel) -> IndependenceReport {
    let (hidden, contexts) = m.marginals();
    let k = contexts.len();
    let witness = (0..m.num_globals())
        .flat_map(|g| (0..k).map(move |c| (g, c)))
        .find_map(|(g, c)| {
            let product = hidden.get(g) * contexts.get(c);
            let joint = m.weight(g, c);
            (*joint != product).then(|| IndependenceWitness::Lambda {
                global: g,
                context: c,
                joint: joint.clone(),
                product,
            })
        });
    IndependenceReport::from_witness(witness, 0)
}

/// Checks that the hidden variable is independent of the context choice:
/// `Σ_s h(U, s, λ) = h_𝒰(U) · h_Λ(λ)` for every context and hidden value.
pub fn check_general_lambda_independence(h: &GeneralHvModel) -> IndependenceReport {
    let k = h.num_hidden();
    let joint = h.context_hidden_marginal();
    let hidden = h.hidden_marginal();
    let contexts: Vec<Rational> = joint.chunks(k.max(1)).map(|c| c.iter().sum()).collect();
    let witness = (0..contexts.len())
        .flat_map(|c| (0..k).map(move |l| (c, l)))
        .find_map(|(c, l)| {
            let product = &contexts[c] * hidden.get(l);
            let j = &joint[c * k + l];
            (*j != product).then(|| IndependenceWitness::GeneralLambda {
                context: c,
                hidden: l,
                joint: j.clone(),
                product,
            })
        });
    IndependenceReport::from_witness(witness, 0)
}

/// Checks `h(s | U, λ) = h(s | V, λ)` for every overlapping pair of contexts, every
/// hidden value, and every section `s` over `U ∩ V`, where
/// `h(s | U, λ) = Σ_{s'|_{U∩V} = s} h(U, s', λ) / Σ_{s'} h(U, s', λ)`.
///
/// A (pair, λ) combination where either denominator is zero is counted as vacuous
/// and skipped.
pub fn check_parameter_independence(h: &GeneralHvModel) -> IndependenceReport {
    let sc = h.scenario();
    let k = h.num_hidden();
    let masses = h.context_hidden_marginal();
    let mut vacuous = 0;
    for i in 0..sc.num_contexts() {
        for j in i + 1..sc.num_contexts() {
            let common = intersect(sc.context(i), sc.context(j));
            if common.is_empty() {
                continue;
            }
            for l in 0..k {
                let (den_i, den_j) = (&masses[i * k + l], &masses[j * k + l]);
                if den_i.is_zero() || den_j.is_zero() {
                    vacuous += 1;
                    continue;
                }
                let num_i = restricted_mass(h, i, l, &common);
                let num_j = restricted_mass(h, j, l, &common);
                for ((section, a), b) in sc.sections(&common).zip(num_i).zip(num_j) {
                    let lhs = a / den_i;
                    let rhs = b / den_j;
                    if lhs != rhs {
                        let witness = IndependenceWitness::Parameter {
                            first: i,
                            second: j,
                            section,
                            hidden: l,
                            lhs,
                            rhs,
                        };
                        return IndependenceReport::from_witness(Some(witness), vacuous);
                    }
                }
            }
        }
    }
    IndependenceReport::from_witness(None, vacuous)
}

/// `Σ_{s'|_subset = s} h(U, s', λ)` for every section `s` over `subset`.
fn restricted_mass(h: &GeneralHvModel, context: usize, hidden: usize, subset: &[usize]) -> Vec<Rational> {
    let sc = h.scenario();
    let mut out = vec![Rational::zero(); sc.num_sections(subset.len())];
    let offset = sc.event_offset(context);
    for (k, s) in sc.sections(sc.context(context)).enumerate() {
        out[sc.section_index(&s.restrict(subset))] += h.weight(offset + k, hidden);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::models::SignedDist;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn product_models_are_lambda_independent() {
        let sc = generators::triangle();
        let hidden = SignedDist::new((0..8).map(|i| r(2 * i - 6, 8)).collect()).unwrap();
        let contexts = SignedDist::new(vec![r(1, 2), r(1, 3), r(1, 6)]).unwrap();
        let m = SchvModel::product(sc, &hidden, &contexts).unwrap();
        assert!(check_lambda_independence(&m).holds);
        assert!(check_general_lambda_independence(&m.embed_canonical()).holds);
    }

    #[test]
    fn section3_model_is_li_but_not_pi() {
        let h = generators::section3_counterexample();
        assert!(check_general_lambda_independence(&h).holds);
        let pi = check_parameter_independence(&h);
        assert!(!pi.holds);
        let sc = h.scenario();
        match pi.witness.unwrap() {
            IndependenceWitness::Parameter { first, second, section, hidden, lhs, rhs } => {
                assert_eq!(sc.labels(sc.context(first)), ["a", "b0"]);
                assert_eq!(sc.labels(sc.context(second)), ["a", "b1"]);
                assert_eq!(section, sc.section(&[("a", "x0")]).unwrap());
                assert_eq!(h.hidden()[hidden], "lambda0");
                assert_eq!((lhs, rhs), (r(1, 1), r(0, 1)));
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn context_dependent_hidden_distribution_fails_general_li() {
        // λ0 only ever appears with the first context.
        let sc = generators::bell(1, 2, 2).unwrap();
        let mut w = vec![Rational::zero(); 4 * 2];
        w[0] = r(1, 2); // ({a0}, 0, λ0)
        w[2 * 2 + 1] = r(1, 2); // ({a1}, 0, λ1)
        let h = GeneralHvModel::new(sc, vec!["l0".into(), "l1".into()], w).unwrap();
        let report = check_general_lambda_independence(&h);
        assert!(!report.holds);
        assert_eq!(
            report.witness,
            Some(IndependenceWitness::GeneralLambda {
                context: 0,
                hidden: 0,
                joint: r(1, 2),
                product: r(1, 4),
            })
        );
    }

    #[test]
    fn single_hidden_value_with_product_outcomes_is_pi() {
        // h^λ is a product of fixed per-measurement outcome distributions.
        let sc = generators::bell(2, 2, 2).unwrap();
        let per_measurement = [r(1, 3), r(1, 2), r(3, 4), r(1, 5)];
        let weights: Vec<Rational> = sc
            .events()
            .iter()
            .map(|ev| {
                let p: Rational = ev
                    .section
                    .iter()
                    .map(|(m, v)| {
                        if v == 0 {
                            per_measurement[m].clone()
                        } else {
                            r(1, 1) - &per_measurement[m]
                        }
                    })
                    .product();
                p * r(1, 4)
            })
            .collect();
        let h = GeneralHvModel::new(sc, vec!["only".into()], weights).unwrap();
        let report = check_parameter_independence(&h);
        assert!(report.holds);
        assert_eq!(report.vacuous, 0);
    }

    #[test]
    fn embedded_pr_box_pchv_is_pi() {
        let p = crate::analysis::realize_pchv(&generators::pr_box()).unwrap();
        let report = check_parameter_independence(&p.embed_canonical());
        assert!(report.holds);
    }
}
