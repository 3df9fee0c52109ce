use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::model::LpProblem;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Arithmetic {
    #[default]
    Float64,
    ExactRational,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum PivotRule {
    Bland,
    /// Largest reduced cost, falling back to Bland while pivots stay degenerate.
    #[default]
    Dantzig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub arithmetic: Arithmetic,
    pub pivot_rule: PivotRule,
    /// Ignored in exact mode.
    pub feasibility_tol: f64,
    pub iteration_cap: u64,
    pub time_cap: Option<Duration>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            arithmetic: Arithmetic::Float64,
            pivot_rule: PivotRule::Dantzig,
            feasibility_tol: 1e-9,
            iteration_cap: 1_000_000,
            time_cap: None,
        }
    }
}

impl SolverOptions {
    pub fn exact() -> Self {
        Self {
            arithmetic: Arithmetic::ExactRational,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iteration_cap == 0 || self.time_cap.is_some_and(|t| t.is_zero()) {
            return Err(Error::Model("solver caps must be positive".into()));
        }
        if !(self.feasibility_tol > 0.0) {
            return Err(Error::Model(
                "feasibility tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationCap,
    TimeCap,
}

/// Solver output, keyed by column and row names so that solutions produced by
/// external solvers can be read in the same shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: Status,
    /// Objective in the problem's own sense; for capped runs the value of the
    /// last feasible basis, if phase two was reached.
    pub objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective_exact: Option<String>,
    #[serde(default)]
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values_exact: Option<BTreeMap<String, String>>,
    /// Row multipliers `y` of the minimization form (a maximization is solved
    /// as the minimization of the negated objective).
    #[serde(default)]
    pub duals: BTreeMap<String, f64>,
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub iterations: u64,
    #[serde(default)]
    pub arithmetic: Arithmetic,
}

impl LpSolution {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Column values in problem order; missing names are an error.
    pub fn value_vec(&self, p: &LpProblem) -> Result<Vec<f64>> {
        p.variables
            .iter()
            .map(|v| {
                self.values
                    .get(&v.name)
                    .copied()
                    .ok_or_else(|| Error::Model(format!("solution has no value for `{}`", v.name)))
            })
            .collect()
    }
}
