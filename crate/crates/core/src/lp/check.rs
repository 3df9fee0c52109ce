//! Solution checking that does not reuse any solver state: residuals are
//! recomputed from the problem rows and the reported values alone.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::model::{LpProblem, Relation, Sense};
use super::solution::LpSolution;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct RowViolation {
    pub row: String,
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionCheck {
    pub tolerance: f64,
    /// Largest violation of a row, measured in the row's own direction.
    pub max_row_violation: f64,
    pub max_bound_violation: f64,
    pub violated_rows: Vec<RowViolation>,
    pub objective: f64,
    /// Bound on the optimum implied by the reported duals (lower for a
    /// minimization, upper for a maximization); `None` without duals.
    pub dual_bound: Option<f64>,
    /// `Some(true)` when exact values were supplied and satisfy every row and
    /// bound with zero residual.
    pub exact_feasible: Option<bool>,
    pub pass: bool,
}

fn violation(relation: Relation, lhs: f64, rhs: f64) -> f64 {
    match relation {
        Relation::Eq => (lhs - rhs).abs(),
        Relation::Le => (lhs - rhs).max(0.0),
        Relation::Ge => (rhs - lhs).max(0.0),
    }
}

pub fn verify_solution(p: &LpProblem, sol: &LpSolution, tol: f64) -> Result<SolutionCheck> {
    p.validate()?;
    let x = sol.value_vec(p)?;
    let mut violated_rows = Vec::new();
    let mut max_row = 0.0f64;
    for r in &p.rows {
        let lhs: f64 = r.coeffs.iter().map(|&(c, a)| a as f64 * x[c]).sum();
        let v = violation(r.relation, lhs, r.rhs as f64);
        max_row = max_row.max(v);
        if v > tol {
            violated_rows.push(RowViolation {
                row: r.name.clone(),
                residual: v,
            });
        }
    }
    let max_bound = p
        .variables
        .iter()
        .zip(&x)
        .map(|(v, &xi)| {
            let below = (v.lower as f64 - xi).max(0.0);
            let above = v.upper.map_or(0.0, |u| (xi - u as f64).max(0.0));
            below.max(above)
        })
        .fold(0.0, f64::max);

    let objective = p.objective.map_or(0.0, |o| x[o.column]);
    let dual_bound = dual_bound(p, sol)?;
    let exact_feasible = sol
        .values_exact
        .as_ref()
        .map(|ex| exact_check(p, ex))
        .transpose()?;
    let pass = violated_rows.is_empty() && max_bound <= tol && exact_feasible != Some(false);
    Ok(SolutionCheck {
        tolerance: tol,
        max_row_violation: max_row,
        max_bound_violation: max_bound,
        violated_rows,
        objective,
        dual_bound,
        exact_feasible,
        pass,
    })
}

/// Weak duality with the reported multipliers, after projecting each one onto
/// its admissible sign. Any `y` of the right sign gives a valid bound, so the
/// projection only costs tightness.
fn dual_bound(p: &LpProblem, sol: &LpSolution) -> Result<Option<f64>> {
    let Some(obj) = p.objective else {
        return Ok(None);
    };
    if sol.duals.is_empty() {
        return Ok(None);
    }
    let mut reduced: Vec<f64> = vec![0.0; p.variables.len()];
    reduced[obj.column] = if obj.sense == Sense::Min { 1.0 } else { -1.0 };
    let mut bound = 0.0;
    for r in &p.rows {
        let y = *sol
            .duals
            .get(&r.name)
            .ok_or_else(|| Error::Model(format!("solution has no dual for `{}`", r.name)))?;
        let y = match r.relation {
            Relation::Eq => y,
            Relation::Le => y.min(0.0),
            Relation::Ge => y.max(0.0),
        };
        bound += y * r.rhs as f64;
        for &(c, a) in &r.coeffs {
            reduced[c] -= y * a as f64;
        }
    }
    for (v, &dj) in p.variables.iter().zip(&reduced) {
        let at_lower = dj * v.lower as f64;
        bound += match v.upper {
            Some(u) => at_lower.min(dj * u as f64),
            None if dj >= 0.0 => at_lower,
            None => {
                return Ok(Some(if obj.sense == Sense::Min {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }))
            }
        };
    }
    Ok(Some(if obj.sense == Sense::Min {
        bound
    } else {
        -bound
    }))
}

fn exact_check(p: &LpProblem, ex: &std::collections::BTreeMap<String, String>) -> Result<bool> {
    let x: Vec<BigRational> = p
        .variables
        .iter()
        .map(|v| {
            let s = ex
                .get(&v.name)
                .ok_or_else(|| Error::Model(format!("no exact value for `{}`", v.name)))?;
            s.parse::<BigRational>()
                .map_err(|e| Error::Model(format!("bad rational `{s}` for `{}`: {e}", v.name)))
        })
        .collect::<Result<_>>()?;
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    for (v, xi) in p.variables.iter().zip(&x) {
        if *xi < int(v.lower) || v.upper.is_some_and(|u| *xi > int(u)) {
            return Ok(false);
        }
    }
    for r in &p.rows {
        let lhs = r.coeffs.iter().fold(BigRational::zero(), |acc, &(c, a)| {
            acc + int(a) * x[c].clone()
        });
        let rhs = int(r.rhs);
        let ok = match r.relation {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
