//! Box-constrained minimizers for arbitrary scalar fields.
//!
//! * [`pso_minimize`]: global-best particle swarm, seeded and reproducible.
//! * [`pattern_search_minimize`]: compass poll with mesh expansion and
//!   contraction.
//! * [`descent_minimize`]: projected gradient descent on central finite
//!   differences with Armijo backtracking.
//!
//! All three keep every iterate inside the box and record a non-increasing
//! best-so-far history.

mod descent;
mod gradient;
mod pattern;
mod pso;

pub use descent::{descent_minimize, DescentConfig, MAX_HALVINGS};
pub use gradient::finite_difference_gradient;
pub use pattern::{pattern_search_minimize, PatternConfig};
pub use pso::{pso_minimize, PsoConfig, RandomWeights};

use crate::error::{check_dim, Error, Result};
use crate::problem::BoxDomain;

/// A scalar field over `R^p` that solvers minimize. Non-finite values mark
/// points the solver must never select.
pub trait Objective: Sync {
    fn dim(&self) -> usize;
    fn value(&self, point: &[f64]) -> f64;
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn value(&self, point: &[f64]) -> f64 {
        (**self).value(point)
    }
}

/// Adapts a closure into an [`Objective`].
#[derive(Debug, Clone, Copy)]
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnObjective { dim, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, point: &[f64]) -> f64 {
        (self.f)(point)
    }
}

/// One best-so-far sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub best_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub history: Vec<HistoryEntry>,
    /// Set by descent when the line search gave up before convergence.
    pub stalled: bool,
}

/// Which solver to run, with its configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum SolverConfig {
    Pso(PsoConfig),
    Pattern(PatternConfig),
    Descent(DescentConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Pso,
    Pattern,
    Descent,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [SolverKind::Pso, SolverKind::Pattern, SolverKind::Descent];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Pso => "pso",
            SolverKind::Pattern => "pattern",
            SolverKind::Descent => "descent",
        }
    }

    /// Whether the solver starts from a user-supplied point.
    pub fn needs_start(self) -> bool {
        !matches!(self, SolverKind::Pso)
    }

    pub fn default_config(self) -> SolverConfig {
        match self {
            SolverKind::Pso => SolverConfig::Pso(PsoConfig::default()),
            SolverKind::Pattern => SolverConfig::Pattern(PatternConfig::default()),
            SolverKind::Descent => SolverConfig::Descent(DescentConfig::default()),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pso" => Ok(SolverKind::Pso),
            "pattern" => Ok(SolverKind::Pattern),
            "descent" => Ok(SolverKind::Descent),
            _ => Err(Error::InvalidInput(format!(
                "unknown solver {s:?} (expected pso, pattern or descent)"
            ))),
        }
    }
}

impl SolverConfig {
    pub fn kind(&self) -> SolverKind {
        match self {
            SolverConfig::Pso(_) => SolverKind::Pso,
            SolverConfig::Pattern(_) => SolverKind::Pattern,
            SolverConfig::Descent(_) => SolverKind::Descent,
        }
    }

    /// Runs the configured solver. `start` is required by pattern search and
    /// descent and ignored by PSO.
    pub fn run<O: Objective + ?Sized>(
        &self,
        field: &O,
        domain: &BoxDomain,
        start: Option<&[f64]>,
    ) -> Result<RunResult> {
        let need_start = || {
            start.ok_or_else(|| {
                Error::InvalidInput(format!("{} requires a start point", self.kind()))
            })
        };
        match self {
            SolverConfig::Pso(c) => pso_minimize(field, domain, c),
            SolverConfig::Pattern(c) => pattern_search_minimize(field, domain, need_start()?, c),
            SolverConfig::Descent(c) => descent_minimize(field, domain, need_start()?, c),
        }
    }
}

/// Non-finite values become `+inf`.
#[inline]
pub(crate) fn score<O: Objective + ?Sized>(field: &O, point: &[f64]) -> f64 {
    let v = field.value(point);
    if v.is_nan() || v == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        v
    }
}

pub(crate) fn check_field<O: Objective + ?Sized>(field: &O, domain: &BoxDomain) -> Result<()> {
    check_dim(domain.dim(), field.dim())
}

pub(crate) fn check_start(domain: &BoxDomain, start: &[f64]) -> Result<()> {
    check_dim(domain.dim(), start.len())?;
    if !domain.contains(start) {
        return Err(Error::InvalidInput(format!(
            "start point {start:?} lies outside the box"
        )));
    }
    Ok(())
}
