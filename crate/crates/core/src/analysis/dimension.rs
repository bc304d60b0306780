use super::incidence_matrix;
use crate::error::Result;
use crate::exactmath::rank;
use crate::scenario::{GlobalAssignment, Scenario, DISTINGUISHED_OUTCOME};

/// The three quantities that must coincide for the no-signalling subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    /// `Σ_{V ∈ Σ} (l − 1)^|V|` over the partial contexts.
    pub d: usize,
    /// Rank of the incidence matrix.
    pub rank_l: usize,
    /// Rank of the images of the boundary global assignments.
    pub basis_rank: usize,
}

impl DimensionReport {
    pub fn consistent(&self) -> bool {
        self.d == self.rank_l && self.rank_l == self.basis_rank
    }
}

/// For every partial context `V` and every section `s` over `V` avoiding the
/// distinguished outcome, the global assignment equal to `s` on `V` and to the
/// distinguished outcome elsewhere. Ordered by partial context, then section.
pub fn boundary_globals(scenario: &Scenario) -> Result<Vec<GlobalAssignment>> {
    let mut out = Vec::new();
    for v in scenario.partial_contexts() {
        for s in scenario.bounded_sections(&v, 0)? {
            let mut values = vec![DISTINGUISHED_OUTCOME; scenario.num_measurements()];
            for (m, o) in s.iter() {
                values[m] = o;
            }
            out.push(GlobalAssignment::new(values));
        }
    }
    Ok(out)
}

pub fn ns_dimension(scenario: &Scenario) -> Result<DimensionReport> {
    let l = scenario.num_outcomes();
    let d = scenario
        .partial_contexts()
        .iter()
        .map(|v| (l - 1).pow(v.len() as u32))
        .sum();
    let incidence = incidence_matrix(scenario)?;
    let columns: Vec<usize> = boundary_globals(scenario)?
        .iter()
        .map(|g| scenario.global_index(g))
        .collect();
    Ok(DimensionReport {
        d,
        rank_l: rank(&incidence),
        basis_rank: rank(&incidence.select_columns(&columns)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn chsh_dimension() {
        let r = ns_dimension(&generators::bell(2, 2, 2).unwrap()).unwrap();
        assert_eq!(r, DimensionReport { d: 9, rank_l: 9, basis_rank: 9 });
    }

    #[test]
    fn single_context_dimension_is_the_full_space() {
        for (n, l) in [(2, 2), (3, 2), (2, 3)] {
            let r = ns_dimension(&generators::single_context(n, l).unwrap()).unwrap();
            let full = l.pow(n as u32);
            assert_eq!(r, DimensionReport { d: full, rank_l: full, basis_rank: full });
        }
    }

    #[test]
    fn triangle_dimension() {
        let r = ns_dimension(&generators::triangle()).unwrap();
        assert_eq!(r.d, 7);
        assert!(r.consistent());
    }

    #[test]
    fn boundary_globals_are_distinct() {
        for s in [generators::bell(2, 2, 3).unwrap(), generators::triangle()] {
            let g = boundary_globals(&s).unwrap();
            let unique: std::collections::BTreeSet<_> = g.iter().collect();
            assert_eq!(unique.len(), g.len());
        }
    }
}
