//! Exact rational scalars, dense matrices, elimination, and linear programming.

mod linalg;
mod matrix;
mod rational;
mod simplex;

pub use linalg::{rank, solve, LinearSystemSolution, SolveStatus};
pub use matrix::Matrix;
pub use rational::{format_rational, parse_rational, Rational};
pub use simplex::{lp_solve, LpOutcome};
