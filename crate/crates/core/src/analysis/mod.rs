//! Executable forms of the No-Signalling / Lambda-Independence correspondence.
//!
//! The central object is the incidence map `L`, which sends a signed distribution
//! `v` on global assignments to the family of its context marginals,
//! `L(v)[(U, s)] = Σ_{ω|_U = s} v[ω]`. A table is No-Signalling exactly when its
//! conditional vector lies in the image of `L`, and any preimage yields a
//! product-form (Lambda-Independent) signed canonical realization.

mod dimension;
mod independence;
mod no_signalling;
mod realize;
mod recursion;

pub use dimension::{boundary_globals, ns_dimension, DimensionReport};
pub use independence::{
    check_general_lambda_independence, check_lambda_independence, check_parameter_independence,
    IndependenceReport, IndependenceWitness,
};
pub use no_signalling::{check_no_signalling, NsReport, NsViolation};
pub use realize::{
    realize_nonneg, realize_pchv, realize_signed_li, RealizationMethod, RealizationResult,
    RealizationStatus,
};
pub use recursion::{boundary_data, reconstruct_from_boundary, PartialTable};

use crate::error::Result;
use crate::exactmath::{Matrix, Rational};
use crate::scenario::Scenario;
use num::{One, Zero};

/// The `|E| × |Ω|` 0/1 matrix of `L`: rows in event order, columns in global
/// assignment order.
pub fn incidence_matrix(scenario: &Scenario) -> Result<Matrix> {
    let globals = scenario.enumerate_globals()?;
    let mut l = Matrix::zeros(scenario.num_events(), globals.len());
    for (g, omega) in globals.iter().enumerate() {
        for c in 0..scenario.num_contexts() {
            let e = scenario.event_index(c, &omega.restrict(scenario.context(c)));
            l[(e, g)] = Rational::one();
        }
    }
    Ok(l)
}

/// `L(v)` without materializing the matrix.
pub fn apply_incidence(scenario: &Scenario, v: &[Rational]) -> Result<Vec<Rational>> {
    let globals = scenario.enumerate_globals()?;
    if v.len() != globals.len() {
        return Err(crate::Error::DimensionMismatch {
            op: "apply_incidence",
            expected: globals.len(),
            found: v.len(),
        });
    }
    let mut out = vec![Rational::zero(); scenario.num_events()];
    for (omega, x) in globals.iter().zip(v) {
        if x.is_zero() {
            continue;
        }
        for c in 0..scenario.num_contexts() {
            out[scenario.event_index(c, &omega.restrict(scenario.context(c)))] += x;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rank;
    use crate::generators;

    #[test]
    fn single_context_incidence_is_the_identity() {
        let s = generators::single_context(3, 2).unwrap();
        assert_eq!(incidence_matrix(&s).unwrap(), Matrix::identity(8));
    }

    #[test]
    fn chsh_incidence_shape() {
        let s = generators::bell(2, 2, 2).unwrap();
        let l = incidence_matrix(&s).unwrap();
        assert_eq!((l.rows(), l.cols()), (16, 16));
        for r in 0..16 {
            let ones = l.row(r).iter().filter(|x| x.is_one()).count();
            assert_eq!(ones, 4);
        }
        assert_eq!(rank(&l), 9);
    }

    #[test]
    fn columns_sum_to_the_number_of_contexts() {
        for s in [
            generators::bell(2, 2, 2).unwrap(),
            generators::triangle(),
            generators::bell(2, 3, 2).unwrap(),
        ] {
            let l = incidence_matrix(&s).unwrap();
            let k = Rational::from_integer(s.num_contexts().into());
            for c in 0..l.cols() {
                let total: Rational = l.column(c).iter().sum();
                assert_eq!(total, k);
            }
        }
    }

    #[test]
    fn apply_matches_matrix_product() {
        let s = generators::triangle();
        let l = incidence_matrix(&s).unwrap();
        let v: Vec<Rational> = (0..8).map(|i| Rational::new((i as i64 - 3).into(), 7.into())).collect();
        assert_eq!(apply_incidence(&s, &v).unwrap(), l.mul_vec(&v).unwrap());
    }

    #[test]
    fn cap_propagates() {
        let s = generators::bell(2, 2, 2).unwrap().with_enumeration_cap(8);
        assert!(matches!(
            incidence_matrix(&s),
            Err(crate::Error::EnumerationCap { required: 16, cap: 8 })
        ));
    }
}
