use crate::error::{Error, Result};

use super::{score, Objective};

/// Central-difference gradient `(f(x + h e_i) - f(x - h e_i)) / 2h`.
///
/// When one neighbour is non-finite the one-sided difference through `f(x)`
/// is used instead; both neighbours non-finite is an error.
pub fn finite_difference_gradient<O: Objective + ?Sized>(
    field: &O,
    point: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    gradient_counted(field, point, h, None).map(|(g, _)| g)
}

/// Same as [`finite_difference_gradient`], reusing a known `f(x)` and
/// returning how many evaluations were spent.
pub(crate) fn gradient_counted<O: Objective + ?Sized>(
    field: &O,
    point: &[f64],
    h: f64,
    mut center: Option<f64>,
) -> Result<(Vec<f64>, usize)> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let mut evals = 0;
    let mut probe = point.to_vec();
    let mut grad = Vec::with_capacity(point.len());
    for i in 0..point.len() {
        let xi = point[i];
        probe[i] = xi + h;
        let forward = score(field, &probe);
        probe[i] = xi - h;
        let backward = score(field, &probe);
        probe[i] = xi;
        evals += 2;

        let d = match (forward.is_finite(), backward.is_finite()) {
            (true, true) => (forward - backward) / (2.0 * h),
            (false, false) => {
                return Err(Error::Solver(format!(
                    "field is non-finite on both sides of coordinate {} at {point:?}",
                    i + 1
                )))
            }
            (fwd_ok, _) => {
                let fx = match center {
                    Some(v) => v,
                    None => {
                        evals += 1;
                        let v = score(field, point);
                        center = Some(v);
                        v
                    }
                };
                if !fx.is_finite() {
                    return Err(Error::Solver(format!(
                        "one-sided difference impossible at non-finite point {point:?}"
                    )));
                }
                if fwd_ok {
                    (forward - fx) / h
                } else {
                    (fx - backward) / h
                }
            }
        };
        grad.push(d);
    }
    Ok((grad, evals))
}
