use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::BoxDomain;

use super::{check_field, score, HistoryEntry, Objective, RunResult};

/// Global-best particle swarm settings. The defaults are the constriction
/// coefficients `w = 0.7298`, `c1 = c2 = 1.49618`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub max_iters: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Draw the random weights `r1, r2` once per particle (default) or once
    /// per coordinate. Per-particle weights keep each move in the span of
    /// the particle's velocity, `pbest - x` and `gbest - x`, so a swarm that
    /// has settled on an oblique equality constraint can still slide along
    /// it. Per-coordinate weights knock every such move off the constraint.
    pub weights: RandomWeights,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RandomWeights {
    #[default]
    PerParticle,
    PerCoordinate,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            swarm_size: 100,
            max_iters: 2000,
            inertia: 0.7298,
            cognitive: 1.49618,
            social: 1.49618,
            weights: RandomWeights::PerParticle,
            seed: 0,
        }
    }
}

impl PsoConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.swarm_size < 2 {
            return bad(format!(
                "swarm_size must be at least 2, got {}",
                self.swarm_size
            ));
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive".into());
        }
        if !(0.0..1.0).contains(&self.inertia) {
            return bad(format!("inertia must lie in [0, 1), got {}", self.inertia));
        }
        if !(self.cognitive >= 0.0 && self.social >= 0.0) {
            return bad("cognitive and social weights must be nonnegative".into());
        }
        Ok(())
    }
}

/// Minimizes `field` over `domain` with global-best PSO.
///
/// Positions start uniformly in the box with zero velocity. Each generation
/// applies `v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x)`, moves
/// `x <- clamp(x + v)` and then updates personal and global bests in
/// particle order. The random stream is `ChaCha8Rng::seed_from_u64(seed)`;
/// see [`RandomWeights`] for how `r1, r2` are drawn.
pub fn pso_minimize<O: Objective + ?Sized>(
    field: &O,
    domain: &BoxDomain,
    config: &PsoConfig,
) -> Result<RunResult> {
    config.validate()?;
    check_field(field, domain)?;
    let dim = domain.dim();
    let n = config.swarm_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut positions: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            domain
                .lower()
                .iter()
                .zip(domain.upper())
                .map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
                .collect()
        })
        .collect();
    let mut velocities = vec![vec![0.0; dim]; n];
    let mut values: Vec<f64> = positions.iter().map(|x| score(field, x)).collect();
    let mut evaluations = n;

    let mut pbest = positions.clone();
    let mut pbest_values = values.clone();
    let Some(mut gbest_index) = argmin(&pbest_values) else {
        return Err(Error::Solver(
            "every particle of the initial swarm evaluated to a non-finite value".into(),
        ));
    };
    let mut gbest = pbest[gbest_index].clone();
    let mut gbest_value = pbest_values[gbest_index];
    let mut history = vec![HistoryEntry {
        iteration: 0,
        best_value: gbest_value,
    }];

    for iter in 1..=config.max_iters {
        for ((x, v), pb) in positions.iter_mut().zip(&mut velocities).zip(&pbest) {
            let (mut r1, mut r2) = (0.0, 0.0);
            if config.weights == RandomWeights::PerParticle {
                r1 = rng.random();
                r2 = rng.random();
            }
            for d in 0..dim {
                if config.weights == RandomWeights::PerCoordinate {
                    r1 = rng.random();
                    r2 = rng.random();
                }
                v[d] = config.inertia * v[d]
                    + config.cognitive * r1 * (pb[d] - x[d])
                    + config.social * r2 * (gbest[d] - x[d]);
                x[d] += v[d];
            }
            domain.clamp_in_place(x);
        }
        for (value, x) in values.iter_mut().zip(&positions) {
            *value = score(field, x);
        }
        evaluations += n;

        let mut improved = false;
        for i in 0..n {
            if values[i] < pbest_values[i] {
                pbest_values[i] = values[i];
                pbest[i].copy_from_slice(&positions[i]);
                if values[i] < gbest_value {
                    gbest_value = values[i];
                    gbest_index = i;
                    improved = true;
                }
            }
        }
        if improved {
            gbest.copy_from_slice(&pbest[gbest_index]);
            history.push(HistoryEntry {
                iteration: iter,
                best_value: gbest_value,
            });
        }
    }

    Ok(RunResult {
        best_point: gbest,
        best_value: gbest_value,
        iterations: config.max_iters,
        evaluations,
        history,
        stalled: false,
    })
}

fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| *v < values[b]) {
            best = Some(i);
        }
    }
    best
}
