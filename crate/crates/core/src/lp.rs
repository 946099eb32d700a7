//! Thin helpers over the `microlp` simplex solver.

use microlp::{ComparisonOp, LinearExpr, Problem, Solution, Variable};

use crate::error::{Error, Result};

pub(crate) use microlp::{ComparisonOp as Cmp, OptimizationDirection as Direction};

/// `Σ coeffs[i]·vars[i]`, skipping zero coefficients.
pub(crate) fn expr(vars: &[Variable], coeffs: &[f64]) -> LinearExpr {
    let mut e = LinearExpr::empty();
    for (v, c) in vars.iter().zip(coeffs) {
        if *c != 0.0 {
            e.add(*v, *c);
        }
    }
    e
}

/// Solves, mapping infeasibility to `None`.
pub(crate) fn solve(problem: &Problem) -> Result<Option<Solution>> {
    match problem.solve() {
        Ok(s) => Ok(Some(s)),
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(Error::LinearProgram(e.to_string())),
    }
}

/// Adds a constraint to a solved problem, re-optimizing from the current basis.
pub(crate) fn tighten(sol: Solution, e: LinearExpr, op: ComparisonOp, rhs: f64) -> Result<Option<Solution>> {
    match sol.add_constraint(e, op, rhs) {
        Ok(s) => Ok(Some(s)),
        Err(microlp::Error::Infeasible) => Ok(None),
        Err(e) => Err(Error::LinearProgram(e.to_string())),
    }
}

pub(crate) fn values(sol: &Solution, vars: &[Variable]) -> Vec<f64> {
    vars.iter().map(|v| sol[*v]).collect()
}
