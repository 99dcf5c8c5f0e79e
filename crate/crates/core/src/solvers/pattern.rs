use crate::error::{Error, Result};
use crate::problem::BoxDomain;

use super::{check_field, check_start, score, HistoryEntry, Objective, RunResult};

#[derive(Debug, Clone, PartialEq)]
pub struct PatternConfig {
    pub initial_mesh: f64,
    pub contraction: f64,
    pub expansion: f64,
    pub mesh_tol: f64,
    pub max_iters: usize,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig {
            initial_mesh: 1.0,
            contraction: 0.5,
            expansion: 2.0,
            mesh_tol: 1e-8,
            max_iters: 100_000,
        }
    }
}

impl PatternConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.initial_mesh > 0.0
            && self.initial_mesh.is_finite()
            && self.contraction > 0.0
            && self.contraction < 1.0
            && self.expansion >= 1.0
            && self.mesh_tol > 0.0
            && self.mesh_tol < self.initial_mesh
            && self.max_iters > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid pattern search settings {self:?}"
            )))
        }
    }
}

/// Compass search from `start`.
///
/// Each iteration polls `x + mesh * e_1, x - mesh * e_1, x + mesh * e_2, ...`
/// (clamped to the box) and moves to the first strictly better point. A
/// successful poll grows the mesh by `expansion`, capped at `initial_mesh`; a
/// failed one shrinks it by `contraction`. Stops once the mesh drops below
/// `mesh_tol` or after `max_iters` polls.
pub fn pattern_search_minimize<O: Objective + ?Sized>(
    field: &O,
    domain: &BoxDomain,
    start: &[f64],
    config: &PatternConfig,
) -> Result<RunResult> {
    config.validate()?;
    check_field(field, domain)?;
    check_start(domain, start)?;

    let mut x = start.to_vec();
    let mut fx = score(field, &x);
    let mut evaluations = 1;
    let mut history = vec![HistoryEntry {
        iteration: 0,
        best_value: fx,
    }];
    let mut mesh = config.initial_mesh;
    let mut iterations = 0;
    let mut trial = x.clone();

    while iterations < config.max_iters && mesh >= config.mesh_tol {
        iterations += 1;
        let mut improved = false;
        'poll: for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let moved = (x[i] + sign * mesh).clamp(domain.lower()[i], domain.upper()[i]);
                if moved == x[i] {
                    continue;
                }
                trial[i] = moved;
                let value = score(field, &trial);
                evaluations += 1;
                if value < fx {
                    x[i] = moved;
                    fx = value;
                    improved = true;
                    break 'poll;
                }
                trial[i] = x[i];
            }
        }
        if improved {
            mesh = (mesh * config.expansion).min(config.initial_mesh);
            history.push(HistoryEntry {
                iteration: iterations,
                best_value: fx,
            });
        } else {
            mesh *= config.contraction;
        }
    }

    Ok(RunResult {
        best_point: x,
        best_value: fx,
        iterations,
        evaluations,
        history,
        stalled: false,
    })
}
