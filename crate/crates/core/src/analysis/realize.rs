use super::incidence_matrix;
use crate::error::Result;
use crate::exactmath::{lp_solve, solve, LpOutcome, Matrix, Rational, SolveStatus};
use crate::models::{EmpiricalModel, SchvModel, SignedDist};
use crate::scenario::Scenario;
use num::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealizationMethod {
    /// The elimination solver's particular solution (free variables zero).
    SolveAny,
    /// A solution of least total negative mass, found by linear programming.
    MinNegativity,
    /// A nonnegative solution, when one exists.
    Nonnegative,
}

impl RealizationMethod {
    pub fn name(self) -> &'static str {
        match self {
            RealizationMethod::SolveAny => "solve_any",
            RealizationMethod::MinNegativity => "min_negativity",
            RealizationMethod::Nonnegative => "nonnegative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealizationStatus {
    Realized,
    Infeasible,
}

/// A Lambda-Independent canonical realization `m = context_dist · hidden_dist`, or
/// the report that none exists for the requested method.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationResult {
    pub status: RealizationStatus,
    pub method: RealizationMethod,
    pub scenario: Scenario,
    pub hidden_dist: Option<SignedDist>,
    pub context_dist: SignedDist,
    /// Total negative mass of `hidden_dist`; present when realized.
    pub negativity: Option<Rational>,
}

impl RealizationResult {
    pub fn is_realized(&self) -> bool {
        self.status == RealizationStatus::Realized
    }

    /// The assembled product model, when realized.
    pub fn model(&self) -> Option<SchvModel> {
        let hidden = self.hidden_dist.as_ref()?;
        Some(
            SchvModel::product(self.scenario.clone(), hidden, &self.context_dist)
                .expect("product of unit-mass factors over a capped scenario"),
        )
    }

    fn infeasible(e: &EmpiricalModel, method: RealizationMethod) -> Self {
        RealizationResult {
            status: RealizationStatus::Infeasible,
            method,
            scenario: e.scenario().clone(),
            hidden_dist: None,
            context_dist: e.context_distribution(),
            negativity: None,
        }
    }

    fn realized(e: &EmpiricalModel, method: RealizationMethod, hidden: Vec<Rational>) -> Self {
        // Every context's sections partition Ω, so any preimage of a conditional
        // table has unit mass.
        let hidden = SignedDist::new(hidden).expect("preimage of a conditional table has mass 1");
        RealizationResult {
            status: RealizationStatus::Realized,
            method,
            scenario: e.scenario().clone(),
            negativity: Some(hidden.negativity()),
            hidden_dist: Some(hidden),
            context_dist: e.context_distribution(),
        }
    }
}

/// The nonnegative canonical realization `p(ω, U) = e(U, ω|_U) / |Ω(U, ω|_U)|`.
///
/// It always realizes `e` but is in general not Lambda-Independent.
pub fn realize_pchv(e: &EmpiricalModel) -> Result<SchvModel> {
    let sc = e.scenario();
    let globals = sc.enumerate_globals()?;
    let k = sc.num_contexts();
    let mut weights = Vec::with_capacity(globals.len() * k);
    for omega in &globals {
        for c in 0..k {
            let ctx = sc.context(c);
            let consistent = sc.num_sections(sc.num_measurements() - ctx.len());
            let ev = sc.event_index(c, &omega.restrict(ctx));
            weights.push(e.weight(ev) / Rational::from_integer(consistent.into()));
        }
    }
    SchvModel::new(sc.clone(), weights)
}

/// Solves `L v = w` for the conditional vector `w` of `e` and attaches the context
/// weights `e(U)`. A solution exists exactly when `e` is No-Signalling.
pub fn realize_signed_li(e: &EmpiricalModel, method: RealizationMethod) -> Result<RealizationResult> {
    let l = incidence_matrix(e.scenario())?;
    let w = e.conditional_vector();
    match method {
        RealizationMethod::SolveAny => {
            let sol = solve(&l, &w)?;
            Ok(match (sol.status, sol.particular) {
                (SolveStatus::Infeasible, _) | (_, None) => RealizationResult::infeasible(e, method),
                (_, Some(v)) => RealizationResult::realized(e, method, v),
            })
        }
        RealizationMethod::MinNegativity => min_negativity(e, &l, &w),
        RealizationMethod::Nonnegative => realize_nonneg(e),
    }
}

/// Minimizes `Σ v⁻` subject to `L (v⁺ − v⁻) = w`, `v± >= 0`.
fn min_negativity(e: &EmpiricalModel, l: &Matrix, w: &[Rational]) -> Result<RealizationResult> {
    let p = l.cols();
    let mut split = Matrix::zeros(l.rows(), 2 * p);
    for r in 0..l.rows() {
        for c in 0..p {
            if !l[(r, c)].is_zero() {
                split[(r, c)] = l[(r, c)].clone();
                split[(r, p + c)] = -l[(r, c)].clone();
            }
        }
    }
    let cost: Vec<Rational> = (0..2 * p)
        .map(|j| if j < p { Rational::zero() } else { Rational::one() })
        .collect();
    let method = RealizationMethod::MinNegativity;
    match lp_solve(&cost, &split, w, None)? {
        LpOutcome::Optimal { x, .. } => {
            let v = (0..p).map(|j| &x[j] - &x[p + j]).collect();
            Ok(RealizationResult::realized(e, method, v))
        }
        LpOutcome::Infeasible => Ok(RealizationResult::infeasible(e, method)),
        LpOutcome::Unbounded => unreachable!("negativity objective is bounded below by 0"),
    }
}

/// Looks for a nonnegative `v` with `L v = w`: a local (probabilistic,
/// Lambda-Independent) realization.
pub fn realize_nonneg(e: &EmpiricalModel) -> Result<RealizationResult> {
    let l = incidence_matrix(e.scenario())?;
    let w = e.conditional_vector();
    let method = RealizationMethod::Nonnegative;
    let zero = vec![Rational::zero(); l.cols()];
    Ok(match lp_solve(&zero, &l, &w, None)? {
        LpOutcome::Optimal { x, .. } => RealizationResult::realized(e, method, x),
        _ => RealizationResult::infeasible(e, method),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_lambda_independence;
    use crate::generators;
    use crate::scenario::GlobalAssignment;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn pchv_realizes_and_is_nonnegative() {
        for seed in 0..5 {
            let e = generators::random_ns_model(&generators::triangle(), seed).unwrap();
            let p = realize_pchv(&e).unwrap();
            assert!(p.is_pchv());
            assert!(p.realizes(&e));
        }
    }

    #[test]
    fn pchv_of_a_point_event_is_uniform_over_consistent_globals() {
        let s = generators::single_context(2, 2).unwrap();
        let mut table = vec![Rational::zero(); 4];
        table[2] = Rational::one();
        let e = EmpiricalModel::new(s, table).unwrap();
        let p = realize_pchv(&e).unwrap();
        // Single context equal to X: Ω(U, s) is the singleton {s}.
        assert_eq!(p.weights().weights(), &[r(0, 1), r(0, 1), r(1, 1), r(0, 1)]);
    }

    #[test]
    fn pr_box_pchv_is_not_lambda_independent() {
        let p = realize_pchv(&generators::pr_box()).unwrap();
        let report = check_lambda_independence(&p);
        assert!(!report.holds);
        assert!(report.witness.is_some());
    }

    #[test]
    fn deterministic_model_is_realized_without_negativity() {
        let s = generators::bell(2, 2, 2).unwrap();
        let e = generators::deterministic(&s, &GlobalAssignment::new(vec![0; 4])).unwrap();
        for method in [
            RealizationMethod::SolveAny,
            RealizationMethod::MinNegativity,
            RealizationMethod::Nonnegative,
        ] {
            let res = realize_signed_li(&e, method).unwrap();
            assert!(res.is_realized());
            assert_eq!(res.negativity, Some(Rational::zero()));
            assert_eq!(res.hidden_dist, Some(SignedDist::point_mass(16, 0)));
            assert!(res.model().unwrap().realizes(&e));
        }
    }

    #[test]
    fn pr_box_needs_negative_mass() {
        let e = generators::pr_box();
        let any = realize_signed_li(&e, RealizationMethod::SolveAny).unwrap();
        let best = realize_signed_li(&e, RealizationMethod::MinNegativity).unwrap();
        assert!(any.negativity.as_ref().unwrap() > &Rational::zero());
        assert_eq!(best.negativity, Some(r(1, 2)));
        assert!(best.negativity <= any.negativity);
        for res in [any, best] {
            let m = res.model().unwrap();
            assert!(m.realizes(&e));
            assert!(check_lambda_independence(&m).holds);
        }
        assert!(!realize_nonneg(&e).unwrap().is_realized());
    }

    #[test]
    fn signalling_table_is_infeasible() {
        let sc = generators::bell(2, 2, 2).unwrap();
        let e = generators::random_signalling_model(&sc, 4).unwrap().model;
        for method in [RealizationMethod::SolveAny, RealizationMethod::MinNegativity] {
            assert!(!realize_signed_li(&e, method).unwrap().is_realized());
        }
        assert!(!realize_nonneg(&e).unwrap().is_realized());
    }

    #[test]
    fn uniform_chsh_table_is_local() {
        let sc = generators::bell(2, 2, 2).unwrap();
        let e = EmpiricalModel::new(sc.clone(), vec![r(1, 16); 16]).unwrap();
        let res = realize_nonneg(&e).unwrap();
        assert!(res.is_realized());
        assert!(res.hidden_dist.as_ref().unwrap().is_nonneg());
        assert!(res.model().unwrap().realizes(&e));
        let uniform = SignedDist::uniform(16);
        assert_eq!(
            super::super::apply_incidence(&sc, uniform.weights()).unwrap(),
            vec![r(1, 4); 16]
        );
    }

    #[test]
    fn convex_combination_of_deterministic_models_is_local() {
        let sc = generators::triangle();
        let a = generators::deterministic(&sc, &GlobalAssignment::new(vec![0, 1, 1])).unwrap();
        let b = generators::deterministic(&sc, &GlobalAssignment::new(vec![1, 1, 0])).unwrap();
        let table: Vec<Rational> = a
            .table()
            .weights()
            .iter()
            .zip(b.table().weights())
            .map(|(x, y)| x * r(1, 3) + y * r(2, 3))
            .collect();
        let e = EmpiricalModel::new(sc, table).unwrap();
        assert!(realize_nonneg(&e).unwrap().is_realized());
    }

    #[test]
    fn triangle_anticorrelation_is_strongly_nonlocal() {
        let e = generators::triangle_anticorrelated();
        assert!(!realize_nonneg(&e).unwrap().is_realized());
        let res = realize_signed_li(&e, RealizationMethod::MinNegativity).unwrap();
        assert_eq!(res.negativity, Some(r(1, 2)));
        assert!(res.model().unwrap().realizes(&e));
    }
}
