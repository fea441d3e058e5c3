//! Exact rational linear algebra and linear programming.

mod matrix;
mod simplex;

pub use matrix::{AffineSolution, LinearSystem, RationalMatrix, Rref};
pub use simplex::{
    lp_solve, max_min_coordinate, max_min_with_free, LpProblem, LpResult, LpStatus, MaxMin, Sense,
};
