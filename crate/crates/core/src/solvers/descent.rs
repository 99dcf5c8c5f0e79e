use crate::error::{Error, Result};
use crate::problem::BoxDomain;

use super::gradient::gradient_counted;
use super::{check_field, check_start, score, HistoryEntry, Objective, RunResult};

/// Backtracking halvings allowed per line search before giving up.
pub const MAX_HALVINGS: usize = 60;

/// Gradient sampling radius, in units of the finite-difference step.
const SAMPLE_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DescentConfig {
    pub fd_step: f64,
    pub initial_step: f64,
    pub backtrack: f64,
    pub armijo: f64,
    pub grad_tol: f64,
    pub max_iters: usize,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            fd_step: 1e-6,
            initial_step: 1.0,
            backtrack: 0.5,
            armijo: 1e-4,
            grad_tol: 1e-8,
            max_iters: 50_000,
        }
    }
}

impl DescentConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        let ok = self.fd_step > 0.0
            && self.initial_step > 0.0
            && self.initial_step.is_finite()
            && unit(self.backtrack)
            && unit(self.armijo)
            && self.grad_tol > 0.0
            && self.max_iters > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "invalid descent settings {self:?}"
            )))
        }
    }
}

/// Projected gradient descent from `start`.
///
/// The gradient is a central finite difference. Trial points are
/// `P(x - a g)` with `P` the box projection; `a` starts at `initial_step`
/// and is multiplied by `backtrack` until the projected Armijo condition
/// `f(y) <= f(x) + armijo * g.(y - x)` holds. Stops when the projected
/// gradient `|P(x - g) - x|` drops below `grad_tol`, after `max_iters`, or
/// with `stalled` set when [`MAX_HALVINGS`] halvings find no acceptable step.
pub fn descent_minimize<O: Objective + ?Sized>(
    field: &O,
    domain: &BoxDomain,
    start: &[f64],
    config: &DescentConfig,
) -> Result<RunResult> {
    config.validate()?;
    check_field(field, domain)?;
    check_start(domain, start)?;

    let mut x = start.to_vec();
    let mut fx = score(field, &x);
    if !fx.is_finite() {
        return Err(Error::InvalidInput(format!(
            "field is not finite at the start point {start:?}"
        )));
    }
    let mut evaluations = 1;
    let mut history = vec![HistoryEntry {
        iteration: 0,
        best_value: fx,
    }];
    let mut iterations = 0;
    let mut stalled = false;
    let mut trial = vec![0.0; x.len()];
    let mut spare = vec![0.0; x.len()];

    while iterations < config.max_iters {
        let grad = match gradient_counted(field, &x, config.fd_step, Some(fx)) {
            Ok((g, n)) => {
                evaluations += n;
                g
            }
            Err(_) => {
                stalled = true;
                break;
            }
        };
        project_step(domain, &x, &grad, 1.0, &mut trial);
        let pg_norm = distance(&trial, &x);
        if pg_norm < config.grad_tol {
            break;
        }
        iterations += 1;

        let mut accepted = line_search(
            field,
            domain,
            &x,
            fx,
            &grad,
            config,
            &mut trial,
            &mut evaluations,
        );
        // no step, or one shorter than the sampling radius, means x is close
        // to a kink of the field: also try the sampled hint and keep the better
        if accepted.is_none() || distance(&trial, &x) < SAMPLE_RADIUS * config.fd_step {
            if let Some((hint, n)) = sampled_hint(field, domain, &x, &grad, config.fd_step) {
                evaluations += n;
                let sampled = line_search(
                    field,
                    domain,
                    &x,
                    fx,
                    &hint,
                    config,
                    &mut spare,
                    &mut evaluations,
                );
                if let Some(v) = sampled {
                    if accepted.is_none_or(|a| v < a) {
                        accepted = sampled;
                        std::mem::swap(&mut trial, &mut spare);
                    }
                }
            }
        }
        let Some(value) = accepted else {
            stalled = true;
            break;
        };
        let improved = value < fx;
        x.copy_from_slice(&trial);
        fx = value;
        if improved {
            history.push(HistoryEntry {
                iteration: iterations,
                best_value: fx,
            });
        }
    }

    Ok(RunResult {
        best_point: x,
        best_value: fx,
        iterations,
        evaluations,
        history,
        stalled,
    })
}

/// Backtracking search along `-hint`; leaves the accepted point in `trial`.
#[allow(clippy::too_many_arguments)]
fn line_search<O: Objective + ?Sized>(
    field: &O,
    domain: &BoxDomain,
    x: &[f64],
    fx: f64,
    hint: &[f64],
    config: &DescentConfig,
    trial: &mut [f64],
    evaluations: &mut usize,
) -> Option<f64> {
    let mut step = config.initial_step;
    for _ in 0..MAX_HALVINGS {
        project_step(domain, x, hint, step, trial);
        if trial == x {
            return None;
        }
        let slope: f64 = hint
            .iter()
            .zip(trial.iter().zip(x))
            .map(|(g, (y, x))| g * (y - x))
            .sum();
        let value = score(field, trial);
        *evaluations += 1;
        if value <= fx + config.armijo * slope && value <= fx {
            return Some(value);
        }
        step *= config.backtrack;
    }
    None
}

/// Minimum-norm element of the segment between two gradients sampled a
/// short way to either side of `x` along `grad`. On a single kink these are
/// the gradients of the two smooth pieces, and the result points along the
/// kink.
fn sampled_hint<O: Objective + ?Sized>(
    field: &O,
    domain: &BoxDomain,
    x: &[f64],
    grad: &[f64],
    h: f64,
) -> Option<(Vec<f64>, usize)> {
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return None;
    }
    let radius = SAMPLE_RADIUS * h;
    let side = |sign: f64| -> Vec<f64> {
        let mut p: Vec<f64> = x
            .iter()
            .zip(grad)
            .map(|(x, g)| x + sign * radius * g / norm)
            .collect();
        domain.clamp_in_place(&mut p);
        p
    };
    let (a, na) = gradient_counted(field, &side(1.0), h, None).ok()?;
    let (b, nb) = gradient_counted(field, &side(-1.0), h, None).ok()?;
    let diff: Vec<f64> = b.iter().zip(&a).map(|(b, a)| b - a).collect();
    let dd: f64 = diff.iter().map(|d| d * d).sum();
    let lambda = if dd > 0.0 {
        (-a.iter().zip(&diff).map(|(a, d)| a * d).sum::<f64>() / dd).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let hint: Vec<f64> = a.iter().zip(&diff).map(|(a, d)| a + lambda * d).collect();
    hint.iter()
        .all(|v| v.is_finite())
        .then_some((hint, na + nb))
}

fn project_step(domain: &BoxDomain, x: &[f64], grad: &[f64], step: f64, out: &mut [f64]) {
    for i in 0..x.len() {
        out[i] = (x[i] - step * grad[i]).clamp(domain.lower()[i], domain.upper()[i]);
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}
