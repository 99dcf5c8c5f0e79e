//! Constrained problems over a box and their penalty deformation.
//!
//! A problem is `min f(x)` over `x` in the box subject to `g_i(x) = 0` and
//! `h_j(x) <= 0`. Its feasibility measure
//!
//! ```text
//! F(x) = sum_i |g_i(x)| + sum_j (|h_j(x)| + h_j(x))
//! ```
//!
//! is nonnegative and vanishes exactly on the feasible set. The deformation
//! `f_t = (1 - t)(f - K) + t M F` is minimized without constraints in place
//! of the original problem.

use std::fmt;

use crate::error::{check_dim, ConstraintKind, Error, Result};
use crate::expr::Expr;
use crate::solvers::Objective;

/// Default threshold on `F` for calling a point feasible.
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-6;

/// Axis-aligned box `[c_1, d_1] x ... x [c_p, d_p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidInput(
                "box must have at least one dimension".into(),
            ));
        }
        check_dim(lower.len(), upper.len())?;
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidInput(format!(
                    "bounds of x{} must be finite with lower < upper, got [{lo}, {hi}]",
                    i + 1
                )));
            }
        }
        Ok(BoxDomain { lower, upper })
    }

    /// The cube `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        BoxDomain::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dim()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Componentwise projection onto the box.
    pub fn clamp(&self, point: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), point.len())?;
        let mut out = point.to_vec();
        self.clamp_in_place(&mut out);
        Ok(out)
    }

    pub(crate) fn clamp_in_place(&self, point: &mut [f64]) {
        for ((x, lo), hi) in point.iter_mut().zip(&self.lower).zip(&self.upper) {
            *x = x.max(*lo).min(*hi);
        }
    }
}

/// Free-function form of [`BoxDomain::clamp`].
pub fn clamp_to_box(domain: &BoxDomain, point: &[f64]) -> Result<Vec<f64>> {
    domain.clamp(point)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    domain: BoxDomain,
    objective: Expr,
    equalities: Vec<Expr>,
    inequalities: Vec<Expr>,
}

impl Problem {
    /// Builds a problem, rejecting expressions that reference variables
    /// beyond the box dimension.
    pub fn new(
        domain: BoxDomain,
        objective: Expr,
        equalities: Vec<Expr>,
        inequalities: Vec<Expr>,
    ) -> Result<Self> {
        let p = domain.dim();
        let check = |what: String, e: &Expr| {
            let k = e.max_variable();
            if k > p {
                Err(Error::InvalidInput(format!(
                    "{what} references x{k} but the domain has {p} variables"
                )))
            } else {
                Ok(())
            }
        };
        check("objective".into(), &objective)?;
        for (i, g) in equalities.iter().enumerate() {
            check(format!("equality {}", i + 1), g)?;
        }
        for (j, h) in inequalities.iter().enumerate() {
            check(format!("inequality {}", j + 1), h)?;
        }
        Ok(Problem {
            domain,
            objective,
            equalities,
            inequalities,
        })
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn objective(&self) -> &Expr {
        &self.objective
    }

    pub fn equalities(&self) -> &[Expr] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Expr] {
        &self.inequalities
    }

    pub fn objective_value(&self, point: &[f64]) -> Result<f64> {
        check_dim(self.dim(), point.len())?;
        self.objective.evaluate(point).map_err(Error::Objective)
    }

    fn constraint_values<'a>(
        &'a self,
        point: &'a [f64],
        kind: ConstraintKind,
    ) -> impl Iterator<Item = Result<f64>> + 'a {
        let list = match kind {
            ConstraintKind::Equality => &self.equalities,
            ConstraintKind::Inequality => &self.inequalities,
        };
        list.iter().enumerate().map(move |(i, e)| {
            e.evaluate(point).map_err(|source| Error::Constraint {
                kind,
                index: i + 1,
                source,
            })
        })
    }

    /// `F(x) = sum |g_i| + sum (|h_j| + h_j)`. The point need not lie in the box.
    pub fn feasibility_measure(&self, point: &[f64]) -> Result<f64> {
        check_dim(self.dim(), point.len())?;
        let mut total = 0.0;
        for g in self.constraint_values(point, ConstraintKind::Equality) {
            total += g?.abs();
        }
        for h in self.constraint_values(point, ConstraintKind::Inequality) {
            let h = h?;
            total += h.abs() + h;
        }
        Ok(total)
    }

    /// Largest `|g_i|` and largest `h_j` at `point`.
    pub fn constraint_report(&self, point: &[f64]) -> Result<ConstraintReport> {
        check_dim(self.dim(), point.len())?;
        let mut max_eq: Option<f64> = None;
        for g in self.constraint_values(point, ConstraintKind::Equality) {
            let g = g?.abs();
            max_eq = Some(max_eq.map_or(g, |m| m.max(g)));
        }
        let mut max_ineq: Option<f64> = None;
        for h in self.constraint_values(point, ConstraintKind::Inequality) {
            let h = h?;
            max_ineq = Some(max_ineq.map_or(h, |m| m.max(h)));
        }
        Ok(ConstraintReport {
            max_eq_residual: max_eq,
            max_ineq_value: max_ineq,
        })
    }

    /// `F(point) <= tol` and `point` inside the box.
    pub fn is_feasible(&self, point: &[f64], tol: f64) -> Result<bool> {
        if tol.is_nan() || tol < 0.0 {
            return Err(Error::InvalidInput(format!(
                "feasibility tolerance must be nonnegative, got {tol}"
            )));
        }
        let measure = self.feasibility_measure(point)?;
        Ok(measure <= tol && self.domain.contains(point))
    }

    /// The deformed objective `f_t` for this problem.
    pub fn deform(&self, params: PenaltyParams) -> Deformed<'_> {
        Deformed {
            problem: self,
            params,
        }
    }
}

pub fn feasibility_measure(problem: &Problem, point: &[f64]) -> Result<f64> {
    problem.feasibility_measure(point)
}

pub fn constraint_report(problem: &Problem, point: &[f64]) -> Result<ConstraintReport> {
    problem.constraint_report(point)
}

pub fn is_feasible(problem: &Problem, point: &[f64], tol: f64) -> Result<bool> {
    problem.is_feasible(point, tol)
}

pub fn deform(problem: &Problem, params: PenaltyParams) -> Deformed<'_> {
    problem.deform(params)
}

/// Writes the problem in the problem-file grammar.
impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (lo, hi)) in self.domain.lower.iter().zip(&self.domain.upper).enumerate() {
            writeln!(f, "var x{} in [{lo}, {hi}]", i + 1)?;
        }
        writeln!(f, "minimize {}", self.objective)?;
        for g in &self.equalities {
            writeln!(f, "eq {g}")?;
        }
        for h in &self.inequalities {
            writeln!(f, "le {h}")?;
        }
        Ok(())
    }
}

/// The scalars `K`, `M` and `t` of the deformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    k: f64,
    m: f64,
    t: f64,
}

impl PenaltyParams {
    pub fn new(k: f64, m: f64, t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidInput(format!(
                "t must lie in (0, 1), got {t}"
            )));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidInput(format!("M must be positive, got {m}")));
        }
        if !k.is_finite() {
            return Err(Error::InvalidInput(format!("K must be finite, got {k}")));
        }
        Ok(PenaltyParams { k, m, t })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `(1 - t)(f - K) + t M F` from precomputed `f` and `F`.
    pub fn combine(&self, objective: f64, feasibility: f64) -> f64 {
        (1.0 - self.t) * (objective - self.k) + self.t * self.m * feasibility
    }
}

/// `K = 100`, `M = 10000`, `t = 0.95`.
impl Default for PenaltyParams {
    fn default() -> Self {
        PenaltyParams {
            k: 100.0,
            m: 10_000.0,
            t: 0.95,
        }
    }
}

/// The scalar field `f_t` of a problem. Borrowed, immutable and `Sync`.
#[derive(Debug, Clone, Copy)]
pub struct Deformed<'a> {
    problem: &'a Problem,
    params: PenaltyParams,
}

impl<'a> Deformed<'a> {
    pub fn problem(&self) -> &'a Problem {
        self.problem
    }

    pub fn params(&self) -> PenaltyParams {
        self.params
    }

    pub fn try_value(&self, point: &[f64]) -> Result<f64> {
        let f = self.problem.objective_value(point)?;
        let feas = self.problem.feasibility_measure(point)?;
        Ok(self.params.combine(f, feas))
    }
}

impl Objective for Deformed<'_> {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    /// Evaluation failures score `+inf` so solvers reject the iterate.
    fn value(&self, point: &[f64]) -> f64 {
        match self.try_value(point) {
            Ok(v) if v.is_finite() => v,
            _ => f64::INFINITY,
        }
    }
}

/// Largest equality residual and largest inequality value at a point;
/// `None` when the corresponding list is empty.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConstraintReport {
    pub max_eq_residual: Option<f64>,
    pub max_ineq_value: Option<f64>,
}
