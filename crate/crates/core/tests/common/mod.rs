//! Hand-written closed forms of the built-in examples, written
//! independently of the expression language, plus property checks shared by
//! the test targets and the acceptance runner.
#![allow(dead_code)]

use deformopt::harness::{builtin_example, ExampleId};
use deformopt::{
    finite_difference_gradient, DescentConfig, Expr, FnObjective, PatternConfig, PenaltyParams,
    Problem, PsoConfig, RunResult, SolverConfig, SolverKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Field = fn(&[f64]) -> f64;
pub type Vector = fn(&[f64]) -> Vec<f64>;

pub struct Oracle {
    pub id: ExampleId,
    pub f: Field,
    pub eqs: Vector,
    pub ineqs: Vector,
}

impl Oracle {
    pub fn feasibility(&self, x: &[f64]) -> f64 {
        let g: f64 = (self.eqs)(x).iter().map(|g| g.abs()).sum();
        let h: f64 = (self.ineqs)(x).iter().map(|h| h.abs() + h).sum();
        g + h
    }

    pub fn satisfies(&self, x: &[f64]) -> bool {
        (self.eqs)(x).iter().all(|&g| g == 0.0) && (self.ineqs)(x).iter().all(|&h| h <= 0.0)
    }
}

fn none(_: &[f64]) -> Vec<f64> {
    Vec::new()
}

fn one(_: &[f64]) -> f64 {
    1.0
}

pub fn map55(x: &[f64]) -> Vec<f64> {
    vec![
        // the cosine argument reaches 1e5, so x3^4 is formed the same way the
        // evaluator forms it to keep the argument bit-identical
        0.5 * (x[0] + x[1] - x[2] * x[2] * x[2] * x[2] * x[4]).cos() * x[3],
        0.1 * ((x[0] * x[1] + x[2] - x[4]).abs() + x[3] * x[3]),
        (x[0] + x[2] * x[3] - (x[1] + x[4]).powi(2)) / 30.0,
        (x[0] - x[1] * x[1] + x[2] - x[4] * x[4]) / 12.0,
        (x[0] + x[1] - (x[2] + x[4] + x[3]).powi(2)) / 40.0,
    ]
}

pub fn map56(x: &[f64]) -> Vec<f64> {
    vec![
        0.001 * ((x[0] + 3.0).powi(2) + (x[1] - 2.0).powi(4) + x[2] * x[2] + x[3] * x[3] + x[4]),
        0.01 * (x[0] + (x[1] + 5.0).powi(2) + x[2] + x[3] + (x[4] + 2.0)),
        0.001 * (x[0].powi(4) + (x[3] - 3.0).powi(2) + (x[4] + 2.0).powi(2)),
        0.001 * ((x[2] - 3.0).powi(4) + x[4] * x[4] + x[0].powi(4)) - 1.0,
        0.01 * (x[0] * x[0] + x[1] + x[2] - (x[4] - 1.0).powi(2)),
    ]
}

fn fixed_point_eqs(map: fn(&[f64]) -> Vec<f64>, x: &[f64]) -> Vec<f64> {
    map(x).iter().zip(x).map(|(t, x)| t - x).collect()
}

pub fn oracle(id: ExampleId) -> Oracle {
    use ExampleId::*;
    let (f, eqs, ineqs): (Field, Vector, Vector) = match id {
        Ex5_1 => (
            |x| x[0] * x[0] + x[0] * x[1] + x[1] * x[1] - 5.0 * x[1],
            |x| vec![x[0] + x[1] - 1.0],
            |x| vec![-x[0], -x[1]],
        ),
        Ex5_2 => (
            |x| -(x[0] - 3.0).powi(6) - (x[1] - 4.0).powi(6),
            none,
            |x| {
                vec![
                    x[0] * x[0] + x[1] * x[1] - 25.0,
                    7.0 - x[0] - x[1],
                    -x[0],
                    -x[1],
                ]
            },
        ),
        Ex5_3 => (
            |x| 1.0 / (x[0] * x[1] * x[2]) + x[0] * x[1],
            none,
            |x| {
                vec![
                    0.5 * x[0] * x[2] + 0.25 * x[0] * x[1] - 1.0,
                    -x[0],
                    -x[1],
                    -x[2],
                ]
            },
        ),
        Ex5_4 => (
            |x| 1.0 / (x[0] * x[1] * x[2]) + x[0] * x[1] + x[2].powi(7),
            none,
            |x| {
                vec![
                    0.5 * x[0] * x[2] + 0.25 * x[0] * x[1] - 1.0,
                    -x[0],
                    -x[1],
                    -x[2],
                ]
            },
        ),
        Ex5_45 => (
            |x| 4.0 * x[0] + 10.0 * x[1] + 15.0 * x[2],
            |x| {
                vec![
                    x[0] + 2.0 * x[1] + 3.0 * x[2] - 3.0,
                    3.0 * x[0] + x[1] + 2.0 * x[2] - 7.5,
                ]
            },
            |x| vec![-x[0], -x[1], -x[2]],
        ),
        Ex5_5 => (one, |x| fixed_point_eqs(map55, x), none),
        Ex5_6 => (one, |x| fixed_point_eqs(map56, x), none),
        Ex5_8 => (
            // x1^2 - 5x1 + 7x2 - x1^2 - x2^2 + (x1-1)^2 + (x2-5)^2, expanded
            |x| x[0] * x[0] - 7.0 * x[0] - 3.0 * x[1] + 26.0,
            |x| vec![3.0 * x[0] + 4.0 * x[1] - 6.0, x[0] + x[1] - 2.0],
            |x| vec![2.0 * x[0] + 3.0 * x[1] - 6.0, -x[0], -x[1]],
        ),
        Ex5_9 => (one, none, |x| {
            let (a, b) = (x[0], x[1]);
            vec![
                2.0 * a + b - 1.0,
                a * a - 1.0,
                (a * a + b * b).sqrt() - a.powi(3) - 2.0,
                -a.powi(3) + 0.5 * (-b - b.powi(3) + (b.powi(3) - b).abs()),
                4.0 * a * a + b * b - a - 2.0 - 1.0,
                (-a).exp() - a - 2.0 * b - 1.0,
            ]
        }),
    };
    Oracle { id, f, eqs, ineqs }
}

/// Analytic gradients of the polynomial objectives.
pub fn analytic_gradient(id: ExampleId, x: &[f64]) -> Option<Vec<f64>> {
    Some(match id {
        ExampleId::Ex5_1 => vec![2.0 * x[0] + x[1], x[0] + 2.0 * x[1] - 5.0],
        ExampleId::Ex5_2 => vec![-6.0 * (x[0] - 3.0).powi(5), -6.0 * (x[1] - 4.0).powi(5)],
        ExampleId::Ex5_45 => vec![4.0, 10.0, 15.0],
        ExampleId::Ex5_8 => vec![2.0 * x[0] - 7.0, -3.0],
        _ => return None,
    })
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| lo + (hi - lo) * rng.random::<f64>())
        .collect()
}

/// `|a - b| <= rel * max(|a|, |b|, 1)`.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Exactly feasible points of Example 5.1: dyadic `x1` on `[0, 1]` and
/// `x2 = 1 - x1`.
pub fn feasible_5_1() -> Vec<Vec<f64>> {
    (0..=1024)
        .map(|k| {
            let a = k as f64 / 1024.0;
            vec![a, 1.0 - a]
        })
        .collect()
}

/// Exactly feasible points of Example 5.45 on its feasible segment
/// `(a, 7a - 16.5, 12 - 5a)`, `a` dyadic in `[33/14, 2.4]`.
pub fn feasible_5_45() -> Vec<Vec<f64>> {
    let scale: f64 = 8192.0;
    let lo = (33.0 / 14.0 * scale).ceil() as i64;
    let hi = (2.4 * scale).floor() as i64;
    (lo..=hi)
        .map(|k| {
            let a = k as f64 / scale;
            vec![a, 7.0 * a - 16.5, 12.0 - 5.0 * a]
        })
        .collect()
}

pub type Check = Result<String, String>;

/// `F >= 0` at random box points of every example, `F = 0` exactly where
/// the closed forms say the constraints hold, and `F = 0` at constructed
/// feasible points with `F > 0` after perturbing them.
pub fn check_feasibility_measure(points_per_example: usize) -> Check {
    let mut checked = 0;
    let mut r = rng(11);
    for id in ExampleId::ALL {
        let problem = builtin_example(id);
        let o = oracle(id);
        for _ in 0..points_per_example {
            let x = uniform(&mut r, id.dim(), -10.0, 10.0);
            let f = problem.feasibility_measure(&x).map_err(|e| e.to_string())?;
            if f.is_nan() || f < 0.0 {
                return Err(format!("{id}: F = {f} at {x:?}"));
            }
            if (f == 0.0) != o.satisfies(&x) {
                return Err(format!("{id}: zero set disagrees at {x:?} (F = {f})"));
            }
            if !close(f, o.feasibility(&x), 1e-12) {
                return Err(format!("{id}: F = {f}, closed form {}", o.feasibility(&x)));
            }
            checked += 1;
        }
    }

    let mut constructed: Vec<(ExampleId, Vec<f64>)> = Vec::new();
    constructed.extend(feasible_5_1().into_iter().map(|x| (ExampleId::Ex5_1, x)));
    constructed.extend(feasible_5_45().into_iter().map(|x| (ExampleId::Ex5_45, x)));
    constructed.push((ExampleId::Ex5_2, vec![4.0, 3.0]));
    constructed.push((ExampleId::Ex5_2, vec![3.5, 3.5]));
    constructed.push((ExampleId::Ex5_5, vec![0.0; 5]));
    constructed.push((ExampleId::Ex5_8, vec![2.0, 0.0]));
    constructed.push((ExampleId::Ex5_9, vec![0.0, 1.0]));
    for (id, x) in &constructed {
        let problem = builtin_example(*id);
        let f = problem.feasibility_measure(x).map_err(|e| e.to_string())?;
        if f != 0.0 {
            return Err(format!(
                "{id}: constructed feasible point {x:?} has F = {f}"
            ));
        }
        for i in 0..x.len() {
            let mut y = x.clone();
            y[i] += 0.125;
            let moved = problem.feasibility_measure(&y).map_err(|e| e.to_string())?;
            // only the equality-constrained examples must leave the zero set
            if !problem.equalities().is_empty()
                && moved.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
            {
                return Err(format!("{id}: perturbed point {y:?} still has F = {moved}"));
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} points"))
}

/// On feasible points `f_t = (1 - t)(f - K)`, and `f_t` orders pairs the
/// way `f` does.
pub fn check_order_preservation(pairs_per_example: usize) -> Check {
    let params = PenaltyParams::default();
    let mut r = rng(12);
    let mut pairs = 0;
    for (id, points) in [
        (ExampleId::Ex5_1, feasible_5_1()),
        (ExampleId::Ex5_45, feasible_5_45()),
    ] {
        let problem = builtin_example(id);
        let field = problem.deform(params);
        let o = oracle(id);
        let value = |x: &[f64]| -> Result<(f64, f64), String> {
            let f = problem.objective_value(x).map_err(|e| e.to_string())?;
            let ft = field.try_value(x).map_err(|e| e.to_string())?;
            let affine = (1.0 - params.t()) * ((o.f)(x) - params.k());
            if !close(ft, affine, 1e-12) {
                return Err(format!("{id}: f_t = {ft}, (1-t)(f-K) = {affine} at {x:?}"));
            }
            Ok((f, ft))
        };
        for _ in 0..pairs_per_example {
            let x = &points[r.random_range(0..points.len())];
            let y = &points[r.random_range(0..points.len())];
            let (fx, ftx) = value(x)?;
            let (fy, fty) = value(y)?;
            if fx <= fy && ftx > fty {
                return Err(format!("{id}: f({x:?}) <= f({y:?}) but f_t reverses"));
            }
            if ftx < fty && fx >= fy {
                return Err(format!("{id}: f_t({x:?}) < f_t({y:?}) but f does not"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} feasible pairs"))
}

fn solver_runs(id: ExampleId) -> Vec<(String, RunResult)> {
    let problem = builtin_example(id);
    let field = problem.deform(PenaltyParams::default());
    let start = id.start_point();
    let mut runs = Vec::new();
    for kind in SolverKind::ALL {
        let config = match kind {
            SolverKind::Pso => SolverConfig::Pso(PsoConfig {
                max_iters: 400,
                ..PsoConfig::default()
            }),
            other => other.default_config(),
        };
        let run = config
            .run(&field, problem.domain(), Some(&start))
            .expect("built-in examples solve");
        runs.push((format!("{id}/{kind}"), run));
    }
    runs
}

/// Best-so-far histories never increase and every returned point lies in
/// the box.
pub fn check_histories() -> Check {
    let mut runs = 0;
    for id in ExampleId::ALL {
        let problem = builtin_example(id);
        for (name, run) in solver_runs(id) {
            let values: Vec<f64> = run.history.iter().map(|h| h.best_value).collect();
            if values.windows(2).any(|w| w[1] > w[0]) {
                return Err(format!("{name}: history increases: {values:?}"));
            }
            if run
                .history
                .windows(2)
                .any(|w| w[1].iteration < w[0].iteration)
            {
                return Err(format!("{name}: history iterations out of order"));
            }
            if values.last() != Some(&run.best_value) {
                return Err(format!("{name}: last history entry is not the best value"));
            }
            if !problem.domain().contains(&run.best_point) {
                return Err(format!("{name}: point {:?} leaves the box", run.best_point));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs"))
}

fn bits(run: &RunResult) -> (Vec<u64>, u64, usize, usize, Vec<(usize, u64)>) {
    (
        run.best_point.iter().map(|v| v.to_bits()).collect(),
        run.best_value.to_bits(),
        run.iterations,
        run.evaluations,
        run.history
            .iter()
            .map(|h| (h.iteration, h.best_value.to_bits()))
            .collect(),
    )
}

/// Equal inputs and seeds give bit-identical results.
pub fn check_determinism() -> Check {
    let mut compared = 0;
    for id in [ExampleId::Ex5_1, ExampleId::Ex5_45, ExampleId::Ex5_5] {
        let problem = builtin_example(id);
        let field = problem.deform(PenaltyParams::default());
        let start = id.start_point();
        let mut configs = vec![
            SolverConfig::Pattern(PatternConfig::default()),
            SolverConfig::Descent(DescentConfig::default()),
        ];
        for seed in [0, 7] {
            configs.push(SolverConfig::Pso(PsoConfig {
                max_iters: 300,
                ..PsoConfig::default().with_seed(seed)
            }));
        }
        for config in &configs {
            let a = config
                .run(&field, problem.domain(), Some(&start))
                .map_err(|e| e.to_string())?;
            let b = config
                .run(&field, problem.domain(), Some(&start))
                .map_err(|e| e.to_string())?;
            if bits(&a) != bits(&b) {
                return Err(format!("{id}/{}: reruns differ", config.kind()));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} reruns"))
}

/// `(source, x, value)` with values worked out by hand.
pub const PRECEDENCE: [(&str, [f64; 3], f64); 16] = [
    ("1 + 2 * 3", [0.0; 3], 7.0),
    ("(1 + 2) * 3", [0.0; 3], 9.0),
    ("2 ^ 3 ^ 2", [0.0; 3], 512.0),
    ("(2 ^ 3) ^ 2", [0.0; 3], 64.0),
    ("-x1 ^ 2", [3.0, 0.0, 0.0], -9.0),
    ("(-x1) ^ 2", [3.0, 0.0, 0.0], 9.0),
    ("2 ^ -1", [0.0; 3], 0.5),
    ("8 / 4 / 2", [0.0; 3], 1.0),
    ("10 - 4 - 3", [0.0; 3], 3.0),
    ("2 * x1 ^ 2 - x2", [3.0, 4.0, 0.0], 14.0),
    ("-2 ^ 2 + 1", [0.0; 3], -3.0),
    ("x1 - -x2", [1.0, 2.0, 0.0], 3.0),
    ("abs(x1 - x2) * 2 + 1", [1.0, 4.0, 0.0], 7.0),
    ("sqrt(x1 * x1 + x2 * x2) / x3", [3.0, 4.0, 5.0], 1.0),
    ("x1 / x2 * x3", [6.0, 3.0, 2.0], 4.0),
    ("1.5e1 - 2 * -x3 ^ 2", [0.0, 0.0, 2.0], 23.0),
];

pub fn check_precedence() -> Check {
    for (src, x, want) in PRECEDENCE {
        let e = Expr::parse(src, 3).map_err(|e| format!("{src}: {e}"))?;
        let got = e.evaluate(&x).map_err(|e| format!("{src}: {e}"))?;
        if got != want {
            return Err(format!("{src} = {got}, expected {want}"));
        }
    }
    Ok(format!("{} expressions", PRECEDENCE.len()))
}

/// Central differences against analytic gradients. Example 5.2 is sampled on
/// `[0, 6]^2`: at the box corners `|f|` reaches 1e7 and rounding alone puts
/// the difference quotient about 5e-4 off.
pub fn check_gradients(points: usize) -> Check {
    let mut r = rng(13);
    let mut worst: f64 = 0.0;
    for id in [
        ExampleId::Ex5_1,
        ExampleId::Ex5_2,
        ExampleId::Ex5_45,
        ExampleId::Ex5_8,
    ] {
        let problem: Problem = builtin_example(id);
        let f = FnObjective::new(id.dim(), |x: &[f64]| problem.objective_value(x).unwrap());
        let (lo, hi) = if id == ExampleId::Ex5_2 {
            (0.0, 6.0)
        } else {
            (-9.9, 9.9)
        };
        for _ in 0..points {
            let x = uniform(&mut r, id.dim(), lo, hi);
            let fd = finite_difference_gradient(&f, &x, 1e-6).map_err(|e| e.to_string())?;
            let exact = analytic_gradient(id, &x).expect("polynomial objective");
            for (a, b) in fd.iter().zip(&exact) {
                worst = worst.max((a - b).abs());
                if (a - b).abs() > 1e-5 {
                    return Err(format!("{id}: gradient {fd:?} vs {exact:?} at {x:?}"));
                }
            }
        }
    }
    Ok(format!("max error {worst:.1e}"))
}

/// Registry problems against the closed forms.
pub fn check_registry(points: usize) -> Check {
    let mut r = rng(14);
    for id in ExampleId::ALL {
        let problem = builtin_example(id);
        let o = oracle(id);
        for _ in 0..points {
            let x = uniform(&mut r, id.dim(), -10.0, 10.0);
            let pairs = [
                (
                    vec![problem.objective().eval_raw(&x)],
                    vec![(o.f)(&x)],
                    "objective",
                ),
                (
                    problem
                        .equalities()
                        .iter()
                        .map(|g| g.eval_raw(&x))
                        .collect(),
                    (o.eqs)(&x),
                    "equalities",
                ),
                (
                    problem
                        .inequalities()
                        .iter()
                        .map(|h| h.eval_raw(&x))
                        .collect(),
                    (o.ineqs)(&x),
                    "inequalities",
                ),
            ];
            for (got, want, what) in pairs {
                if got.len() != want.len()
                    || got.iter().zip(&want).any(|(a, b)| !close(*a, *b, 1e-12))
                {
                    return Err(format!("{id} {what}: {got:?} vs {want:?} at {x:?}"));
                }
            }
        }
    }
    Ok(format!("{points} points x 9 examples"))
}
