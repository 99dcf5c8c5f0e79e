//! Constrained minimization by unconstrained minimization of a penalty
//! deformation.
//!
//! A [`Problem`] asks for `min f(x)` over a box subject to equalities
//! `g_i(x) = 0` and inequalities `h_j(x) <= 0`. Its deformation
//!
//! ```text
//! f_t = (1 - t)(f - K) + t M F,    F = sum |g_i| + sum (|h_j| + h_j)
//! ```
//!
//! equals `(1 - t)(f - K)` on the feasible set, so on that set it orders
//! points exactly as `f` does. Any box-constrained minimizer can then be
//! pointed at `f_t`; three are provided in [`solvers`].
//!
//! ```
//! use deformopt::{parse_problem, PenaltyParams, PsoConfig, pso_minimize};
//!
//! let problem = parse_problem(
//!     "var x1 in [-10, 10]
//!      var x2 in [-10, 10]
//!      minimize x1^2 + x1*x2 + x2^2 - 5*x2
//!      eq x1 + x2 - 1
//!      le -x1
//!      le -x2",
//! )
//! .unwrap();
//! let field = problem.deform(PenaltyParams::default());
//! let run = pso_minimize(&field, problem.domain(), &PsoConfig::default().with_seed(7)).unwrap();
//! let value = problem.objective_value(&run.best_point).unwrap();
//! assert!((value + 4.0).abs() < 1e-3);
//! ```

pub mod applications;
pub mod error;
pub mod expr;
pub mod harness;
pub mod problem;
pub mod solvers;
pub mod source;

pub use applications::{
    brouwer_problem, fixed_point_residual, scalarize_sum, target_value_problem, threshold_problem,
    SelfMap, ThresholdSpec,
};
pub use error::{ConstraintKind, Error, EvalError, ParseError, Position, Result};
pub use expr::{parse_expression, tokenize, Expr, Token, TokenKind};
pub use problem::{
    clamp_to_box, constraint_report, deform, feasibility_measure, is_feasible, BoxDomain,
    ConstraintReport, Deformed, PenaltyParams, Problem, DEFAULT_FEASIBILITY_TOL,
};
pub use solvers::{
    descent_minimize, finite_difference_gradient, pattern_search_minimize, pso_minimize,
    DescentConfig, FnObjective, HistoryEntry, Objective, PatternConfig, PsoConfig, RandomWeights,
    RunResult, SolverConfig, SolverKind,
};
pub use source::{parse_problem, parse_self_map};
