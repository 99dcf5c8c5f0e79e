//! Reductions of fixed-point searches and vector objectives to [`Problem`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::expr::Expr;
use crate::problem::{BoxDomain, Problem};

/// A map `T = (T_1, ..., T_p)` of a box into itself, one expression per
/// coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMap {
    components: Vec<Expr>,
    domain: BoxDomain,
}

impl SelfMap {
    pub fn new(components: Vec<Expr>, domain: BoxDomain) -> Result<Self> {
        check_dim(domain.dim(), components.len())?;
        let p = domain.dim();
        for (i, c) in components.iter().enumerate() {
            if c.max_variable() > p {
                return Err(Error::InvalidInput(format!(
                    "map component {} references x{} but the domain has {p} variables",
                    i + 1,
                    c.max_variable()
                )));
            }
        }
        Ok(SelfMap { components, domain })
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// `T(point)`.
    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), point.len())?;
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.evaluate(point).map_err(|source| Error::MapComponent {
                    index: i + 1,
                    source,
                })
            })
            .collect()
    }

    /// Samples `samples` uniform points of the box and returns the first one
    /// whose image leaves the box (or fails to evaluate). Only a sanity
    /// check: `None` does not prove the map is a self-map.
    pub fn find_escape(&self, samples: usize, seed: u64) -> Option<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = (self.domain.lower(), self.domain.upper());
        let mut x = vec![0.0; self.dim()];
        for _ in 0..samples {
            for i in 0..x.len() {
                x[i] = lo[i] + (hi[i] - lo[i]) * rng.random::<f64>();
            }
            match self.apply(&x) {
                Ok(image) if self.domain.contains(&image) => {}
                _ => return Some(x),
            }
        }
        None
    }
}

/// Fixed points of `T` as the feasible set of `min 1 s.t. T_i(x) - x_i = 0`.
pub fn brouwer_problem(map: &SelfMap) -> Problem {
    let equalities = map
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| c.clone() - Expr::var(i + 1))
        .collect();
    Problem::new(
        map.domain.clone(),
        Expr::constant(1.0),
        equalities,
        Vec::new(),
    )
    .expect("components were validated against the domain")
}

/// `max_i |T_i(x) - x_i|`.
pub fn fixed_point_residual(map: &SelfMap, point: &[f64]) -> Result<f64> {
    let image = map.apply(point)?;
    Ok(image
        .iter()
        .zip(point)
        .map(|(t, x)| (t - x).abs())
        .fold(0.0, f64::max))
}

/// Sum scalarization: minimize `f_1 + ... + f_k` under the given constraints.
pub fn scalarize_sum(
    objectives: Vec<Expr>,
    equalities: Vec<Expr>,
    inequalities: Vec<Expr>,
    domain: BoxDomain,
) -> Result<Problem> {
    let objective = objectives
        .into_iter()
        .reduce(|acc, f| acc + f)
        .ok_or_else(|| {
            Error::InvalidInput("sum scalarization needs at least one objective".into())
        })?;
    Problem::new(domain, objective, equalities, inequalities)
}

/// Caps `f_i(x) <= c_i` on top of optional base constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSpec {
    objectives: Vec<Expr>,
    caps: Vec<f64>,
    equalities: Vec<Expr>,
    inequalities: Vec<Expr>,
    domain: BoxDomain,
}

impl ThresholdSpec {
    pub fn new(objectives: Vec<Expr>, caps: Vec<f64>, domain: BoxDomain) -> Result<Self> {
        check_dim(objectives.len(), caps.len())?;
        if let Some(c) = caps.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "threshold caps must be finite, got {c}"
            )));
        }
        Ok(ThresholdSpec {
            objectives,
            caps,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            domain,
        })
    }

    pub fn with_base_constraints(mut self, equalities: Vec<Expr>, inequalities: Vec<Expr>) -> Self {
        self.equalities = equalities;
        self.inequalities = inequalities;
        self
    }
}

/// `min 1` subject to the base constraints followed by `f_i - c_i <= 0`.
pub fn threshold_problem(spec: &ThresholdSpec) -> Result<Problem> {
    let mut inequalities = spec.inequalities.clone();
    inequalities.extend(
        spec.objectives
            .iter()
            .zip(&spec.caps)
            .map(|(f, &c)| f.clone() - Expr::constant(c)),
    );
    Problem::new(
        spec.domain.clone(),
        Expr::constant(1.0),
        spec.equalities.clone(),
        inequalities,
    )
}

/// Turns `problem` into the search for a feasible point with `f(x) <= target`.
pub fn target_value_problem(problem: &Problem, target: f64) -> Result<Problem> {
    if !target.is_finite() {
        return Err(Error::InvalidInput(format!(
            "target value must be finite, got {target}"
        )));
    }
    let mut inequalities = problem.inequalities().to_vec();
    inequalities.push(problem.objective().clone() - Expr::constant(target));
    Problem::new(
        problem.domain().clone(),
        Expr::constant(1.0),
        problem.equalities().to_vec(),
        inequalities,
    )
}
