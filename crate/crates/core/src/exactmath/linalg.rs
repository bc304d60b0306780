use super::{Matrix, Rational};
use crate::error::{Error, Result};
use num::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Unique,
    Underdetermined,
    Infeasible,
}

/// Result of solving `A x = b` exactly.
///
/// `particular` is present unless the system is infeasible. The kernel basis spans
/// the null space of `A` regardless of `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystemSolution {
    pub status: SolveStatus,
    pub particular: Option<Vec<Rational>>,
    pub kernel_basis: Vec<Vec<Rational>>,
}

/// Reduced row echelon form of an augmented system, computed in place.
///
/// Pivots are chosen as the first nonzero entry at or below the current row in the
/// leftmost remaining column, so the result depends only on the input.
struct Rref {
    m: Matrix,
    pivots: Vec<usize>,
}

fn rref(mut m: Matrix, pivot_limit: usize) -> Rref {
    let rows = m.rows();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_limit {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for k in 0..cols {
                let tmp = m[(p, k)].clone();
                m[(p, k)] = m[(r, k)].clone();
                m[(r, k)] = tmp;
            }
        }
        let inv = m[(r, c)].recip();
        for k in c..cols {
            if !m[(r, k)].is_zero() {
                m[(r, k)] = &m[(r, k)] * &inv;
            }
        }
        for i in 0..rows {
            if i == r || m[(i, c)].is_zero() {
                continue;
            }
            let factor = m[(i, c)].clone();
            for k in c..cols {
                if !m[(r, k)].is_zero() {
                    let delta = &factor * &m[(r, k)];
                    m[(i, k)] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { m, pivots }
}

/// Rank of `a` by exact elimination.
pub fn rank(a: &Matrix) -> usize {
    rref(a.clone(), a.cols()).pivots.len()
}

/// Solves `a x = b` by Gauss-Jordan elimination over the rationals.
///
/// Free variables are set to zero in the particular solution. The kernel basis has
/// one vector per free column, with a 1 in that column.
pub fn solve(a: &Matrix, b: &[Rational]) -> Result<LinearSystemSolution> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            op: "solve",
            expected: a.rows(),
            found: b.len(),
        });
    }
    let n = a.cols();
    let mut aug = Matrix::zeros(a.rows(), n + 1);
    for r in 0..a.rows() {
        for c in 0..n {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, n)] = b[r].clone();
    }
    let Rref { m, pivots } = rref(aug, n);

    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let kernel_basis: Vec<Vec<Rational>> = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[(r, free)].clone();
            }
            v
        })
        .collect();

    let consistent = (pivots.len()..m.rows()).all(|r| m[(r, n)].is_zero());
    if !consistent {
        return Ok(LinearSystemSolution {
            status: SolveStatus::Infeasible,
            particular: None,
            kernel_basis,
        });
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = m[(r, n)].clone();
    }
    let status = if kernel_basis.is_empty() {
        SolveStatus::Unique
    } else {
        SolveStatus::Underdetermined
    };
    Ok(LinearSystemSolution {
        status,
        particular: Some(x),
        kernel_basis,
    })
}
