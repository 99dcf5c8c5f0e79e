use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::problem::{ConstraintReport, PenaltyParams, Problem};
use crate::solvers::{SolverConfig, SolverKind};

use super::registry::{builtin_example, ExampleId};

/// What a solver returned for one example, evaluated on the original problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub point: Vec<f64>,
    /// `f_t` at `point`.
    pub deformed_value: f64,
    /// `f` at `point`.
    pub raw_value: f64,
    pub feasibility: f64,
    pub report: ConstraintReport,
    pub stalled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    /// Example tag such as `5.1`, or a name for a user problem.
    pub example: String,
    pub solver: SolverKind,
    /// PSO seed; `None` for the deterministic solvers.
    pub seed: Option<u64>,
    pub initial_point: Option<Vec<f64>>,
    /// Solver failures are kept per row.
    pub outcome: Result<Solution, String>,
    pub wall_time: Duration,
}

/// Solves one problem and evaluates the returned point.
pub fn solve_problem(
    problem: &Problem,
    params: PenaltyParams,
    config: &SolverConfig,
    start: Option<&[f64]>,
) -> Result<Solution> {
    let field = problem.deform(params);
    let run = config.run(&field, problem.domain(), start)?;
    let point = run.best_point;
    Ok(Solution {
        deformed_value: field.try_value(&point)?,
        raw_value: problem.objective_value(&point)?,
        feasibility: problem.feasibility_measure(&point)?,
        report: problem.constraint_report(&point)?,
        stalled: run.stalled,
        point,
    })
}

/// Runs `config` on every example in `ids` with the registry start points.
///
/// PSO produces one row per `(example, seed)`, overriding the configured
/// seed, and needs a non-empty seed list. Pattern search and descent ignore
/// `seeds` and produce one row per example. Rows come back in input order;
/// they are computed in parallel.
pub fn run_benchmark(
    ids: &[ExampleId],
    config: &SolverConfig,
    params: PenaltyParams,
    seeds: &[u64],
) -> Result<Vec<BenchRow>> {
    if ids.is_empty() {
        return Err(Error::InvalidInput("no examples to run".into()));
    }
    let tasks: Vec<(ExampleId, Option<u64>)> = match config {
        SolverConfig::Pso(_) => {
            if seeds.is_empty() {
                return Err(Error::InvalidInput(
                    "PSO benchmark needs at least one seed".into(),
                ));
            }
            ids.iter()
                .flat_map(|&id| seeds.iter().map(move |&s| (id, Some(s))))
                .collect()
        }
        _ => ids.iter().map(|&id| (id, None)).collect(),
    };

    Ok(tasks
        .into_par_iter()
        .map(|(id, seed)| run_one(id, config, params, seed))
        .collect())
}

fn run_one(
    id: ExampleId,
    config: &SolverConfig,
    params: PenaltyParams,
    seed: Option<u64>,
) -> BenchRow {
    let problem = builtin_example(id);
    let (config, start) = match (config, seed) {
        (SolverConfig::Pso(c), Some(s)) => (SolverConfig::Pso(c.clone().with_seed(s)), None),
        (other, _) => (other.clone(), Some(id.start_point())),
    };
    let mut row = solve_row(id.tag(), &problem, params, &config, start.as_deref());
    row.seed = seed;
    row
}

/// Solves `problem` once and times it. The seed column is filled for PSO.
pub fn solve_row(
    label: &str,
    problem: &Problem,
    params: PenaltyParams,
    config: &SolverConfig,
    start: Option<&[f64]>,
) -> BenchRow {
    let (seed, start) = match config {
        SolverConfig::Pso(c) => (Some(c.seed), None),
        _ => (None, start),
    };
    let timer = Instant::now();
    let outcome = solve_problem(problem, params, config, start).map_err(|e| e.to_string());
    BenchRow {
        example: label.to_string(),
        solver: config.kind(),
        seed,
        initial_point: start.map(<[f64]>::to_vec),
        outcome,
        wall_time: timer.elapsed(),
    }
}
