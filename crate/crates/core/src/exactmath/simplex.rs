//! Dense two-phase primal simplex over exact rationals.
//!
//! Solves `minimize c.x subject to A x = b, x >= lower` where `lower` defaults to the
//! zero vector. Both phases use Bland's rule (smallest eligible entering index,
//! smallest basic index on ratio ties), so the pivot sequence is fully determined
//! by the input and the method always terminates.

use super::{Matrix, Rational};
use crate::error::{Error, Result};
use num::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs for every column of the current phase.
    reduced: Vec<Rational>,
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        self.rhs[row] = &self.rhs[row] * &inv;

        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.reduced[col].is_zero() {
            let factor = self.reduced[col].clone();
            for (v, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    fn recompute_reduced(&mut self, costs: &[Rational]) {
        let mut reduced = costs.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (d, a) in reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *d -= cb * a;
                }
            }
        }
        self.reduced = reduced;
    }

    fn run(&mut self, eligible: usize) -> PhaseEnd {
        loop {
            let Some(col) = (0..eligible).find(|&j| self.reduced[j].is_negative()) else {
                return PhaseEnd::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return PhaseEnd::Unbounded,
            }
        }
    }
}

/// Minimizes `c.x` subject to `a_eq x = b_eq` and `x >= lower_bounds` (zero when
/// `None`).
///
/// Infeasibility and unboundedness are reported as outcomes; only inconsistent
/// shapes produce an error.
pub fn lp_solve(
    c: &[Rational],
    a_eq: &Matrix,
    b_eq: &[Rational],
    lower_bounds: Option<&[Rational]>,
) -> Result<LpOutcome> {
    let n = a_eq.cols();
    let m = a_eq.rows();
    let check = |expected: usize, found: usize| {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                op: "lp_solve",
                expected,
                found,
            })
        }
    };
    check(n, c.len())?;
    check(m, b_eq.len())?;
    if let Some(lb) = lower_bounds {
        check(n, lb.len())?;
    }

    // Shift x = y + lower so that y >= 0.
    let mut rhs = b_eq.to_vec();
    if let Some(lb) = lower_bounds {
        let shift = a_eq.mul_vec(lb)?;
        for (r, s) in rhs.iter_mut().zip(shift) {
            *r -= s;
        }
    }

    // Phase 1: one artificial per row, rows sign-flipped so rhs >= 0.
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let flip = rhs[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for v in a_eq.row(i) {
            row.push(if flip { -v.clone() } else { v.clone() });
        }
        row.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        if flip {
            rhs[i] = -rhs[i].clone();
        }
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        reduced: Vec::new(),
    };
    let phase1_costs: Vec<Rational> = (0..width)
        .map(|j| if j < n { Rational::zero() } else { Rational::one() })
        .collect();
    tab.recompute_reduced(&phase1_costs);
    // Phase 1 is bounded below by zero.
    tab.run(width);
    let infeasibility: Rational = tab
        .basis
        .iter()
        .zip(&tab.rhs)
        .filter(|(&b, _)| b >= n)
        .map(|(_, r)| r.clone())
        .sum();
    if infeasibility.is_positive() {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive remaining artificials (all at level zero) out of the basis; rows where
    // that is impossible are linearly dependent and get dropped.
    let mut redundant = Vec::new();
    for i in 0..tab.rows.len() {
        if tab.basis[i] < n {
            continue;
        }
        match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
            Some(j) => tab.pivot(i, j),
            None => redundant.push(i),
        }
    }
    for &i in redundant.iter().rev() {
        tab.rows.remove(i);
        tab.rhs.remove(i);
        tab.basis.remove(i);
    }
    for row in tab.rows.iter_mut() {
        row.truncate(n);
    }

    // Phase 2 on the original objective.
    tab.recompute_reduced(c);
    if let PhaseEnd::Unbounded = tab.run(n) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = vec![Rational::zero(); n];
    for (&b, r) in tab.basis.iter().zip(&tab.rhs) {
        x[b] = r.clone();
    }
    if let Some(lb) = lower_bounds {
        for (xi, l) in x.iter_mut().zip(lb) {
            *xi += l;
        }
    }
    let value = c
        .iter()
        .zip(&x)
        .fold(Rational::zero(), |acc, (ci, xi)| acc + ci * xi);
    Ok(LpOutcome::Optimal { value, x })
}
