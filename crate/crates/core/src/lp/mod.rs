//! Linear programming: model assembly, MPS interchange, a primal simplex and
//! an independent solution checker.

pub mod check;
pub mod model;
pub mod mps;
pub mod simplex;
pub mod solution;

pub use check::{verify_solution, SolutionCheck};
pub use model::{
    balanced_rho, build_lp, evaluate_point, CrossVariant, Family, LpProblem, Relation, RowKind,
    Sense,
};
pub use simplex::solve;
pub use solution::{Arithmetic, LpSolution, PivotRule, SolverOptions, Status};
