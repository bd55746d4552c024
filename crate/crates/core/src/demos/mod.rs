//! Two applications: mutually recursive subtyping and containment, and a
//! goto program rewritten as three mutually recursive functions.

pub mod paulson;
pub mod subtyping;

use thiserror::Error;

use crate::solvers::SolveError;

pub use paulson::{paulson_trio, paulson_trio_with_budget, run_from, Entry, Trio, PAULSON_STEP_BUDGET};
pub use subtyping::{
    solve_subtyping, ClassDecl, ClassTable, GroundType, IntervalType, RelationPairState, SubtypeGenerators,
    Universe, DEFAULT_DEPTH, DEFAULT_TYPE_CAP, NULL, OBJECT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DemoError {
    #[error("StepBudgetExceeded: no result within {budget} steps")]
    StepBudgetExceeded { budget: u64 },
    #[error("invalid class table: {0}")]
    InvalidClassTable(String),
    #[error("universe has {size} types, over the cap of {cap}")]
    UniverseCap { size: usize, cap: usize },
    #[error("`{0}` is not in the universe")]
    UnknownType(String),
    #[error("solved subtyping is not a preorder: {0}")]
    NotPreorder(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
