//! Maximization of (possibly non-concave) smooth objectives: gradient ascent
//! and damped Newton with backtracking, random restarts, and λ-continuation.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, UnlabeledDataset};
use crate::error::{Error, Result};
use crate::logistic::{FitConfig, FitResult, RegularizedObjective, Theta};

/// A smooth function to be maximized, with its analytic gradient.
pub trait Objective {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
}

/// Standard deviation of the random restart initialization.
pub const RESTART_INIT_STD: f64 = 0.1;
/// Finite-difference step for the Newton Hessian.
pub const HESSIAN_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Gradient,
    Newton,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Backtracking {
    pub shrink: f64,
    pub max_halvings: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub step: f64,
    pub grad_tol: f64,
    pub max_iter: usize,
    pub backtracking: Backtracking,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Gradient,
            step: 1.0,
            grad_tol: 1e-6,
            max_iter: 2000,
            backtracking: Backtracking {
                shrink: 0.5,
                max_halvings: 50,
            },
        }
    }
}

impl OptimizerConfig {
    pub fn newton() -> Self {
        Self {
            method: Method::Newton,
            max_iter: 200,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidConfig("grad_tol must be > 0".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidConfig("step must be > 0".into()));
        }
        let s = self.backtracking.shrink;
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidConfig(format!("shrink factor {s} not in (0, 1)")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Gradient norm fell below `grad_tol`.
    Converged,
    /// `max_iter` steps were taken.
    IterationCap,
    /// Backtracking exhausted its halvings without an increase.
    Stalled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Maximum {
    pub theta: Vec<f64>,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub termination: Termination,
    /// `(iteration, objective)` after every accepted step; entry 0 is the start.
    pub trace: Vec<(usize, f64)>,
    /// Newton iterations that fell back to a gradient step.
    pub newton_fallbacks: Vec<usize>,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Central finite-difference Hessian of the analytic gradient, not symmetrized.
pub fn fd_hessian<O: Objective + ?Sized>(obj: &O, x: &[f64], step: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut h = DMatrix::zeros(n, n);
    let mut probe = x.to_vec();
    for j in 0..n {
        probe[j] = x[j] + step;
        let gp = obj.gradient(&probe);
        probe[j] = x[j] - step;
        let gm = obj.gradient(&probe);
        probe[j] = x[j];
        for i in 0..n {
            h[(i, j)] = (gp[i] - gm[i]) / (2.0 * step);
        }
    }
    h
}

/// Newton ascent direction `-H⁻¹ g`, or `None` when `-H` is not positive definite.
fn newton_direction(hessian: DMatrix<f64>, grad: &[f64]) -> Option<Vec<f64>> {
    let sym = (&hessian + hessian.transpose()) * 0.5;
    let neg = -sym;
    let chol = neg.cholesky()?;
    let d = chol.solve(&DVector::from_column_slice(grad));
    let d: Vec<f64> = d.iter().copied().collect();
    let ascent: f64 = d.iter().zip(grad).map(|(a, b)| a * b).sum();
    (d.iter().all(|v| v.is_finite()) && ascent > 0.0).then_some(d)
}

/// Maximizes `obj` from `theta0`.
///
/// Every accepted step strictly increases the objective; when backtracking
/// cannot find an increase the run stops with [`Termination::Stalled`].
pub fn maximize<O: Objective + ?Sized>(obj: &O, theta0: &[f64], cfg: &OptimizerConfig) -> Result<Maximum> {
    cfg.validate()?;
    if theta0.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            expected: obj.dim(),
            got: theta0.len(),
        });
    }
    let mut x = theta0.to_vec();
    let mut fx = obj.value(&x);
    if !fx.is_finite() {
        return Err(Error::NonFinite { what: "objective" });
    }
    let mut g = obj.gradient(&x);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "gradient" });
    }

    let mut trace = vec![(0, fx)];
    let mut fallbacks = Vec::new();
    let mut grad_step = cfg.step;
    let mut termination = Termination::IterationCap;
    let mut iterations = 0;

    for it in 1..=cfg.max_iter {
        if norm(&g) <= cfg.grad_tol {
            termination = Termination::Converged;
            break;
        }
        let (direction, mut alpha, is_newton) = match cfg.method {
            Method::Gradient => (g.clone(), grad_step, false),
            Method::Newton => match newton_direction(fd_hessian(obj, &x, HESSIAN_FD_STEP), &g) {
                Some(d) => (d, cfg.step.min(1.0), true),
                None => {
                    fallbacks.push(it);
                    (g.clone(), grad_step, false)
                }
            },
        };

        let mut accepted = None;
        for _ in 0..=cfg.backtracking.max_halvings {
            let cand: Vec<f64> = x.iter().zip(&direction).map(|(a, d)| a + alpha * d).collect();
            let fc = obj.value(&cand);
            if fc.is_finite() && fc > fx {
                accepted = Some((cand, fc));
                break;
            }
            alpha *= cfg.backtracking.shrink;
        }
        let Some((cand, fc)) = accepted else {
            termination = Termination::Stalled;
            break;
        };
        if !is_newton {
            // Let the gradient step grow back after successful moves.
            grad_step = (alpha * 2.0).min(1e6);
        }
        x = cand;
        fx = fc;
        g = obj.gradient(&x);
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical(format!("non-finite gradient at iteration {it}")));
        }
        iterations = it;
        trace.push((it, fx));
    }
    if termination == Termination::IterationCap && norm(&g) <= cfg.grad_tol {
        termination = Termination::Converged;
    }

    Ok(Maximum {
        grad_norm: norm(&g),
        theta: x,
        value: fx,
        iterations,
        termination,
        trace,
        newton_fallbacks: fallbacks,
    })
}

/// Increasing sequence of λ values ending at the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuationSchedule {
    lambdas: Vec<f64>,
}

impl ContinuationSchedule {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::InvalidConfig("empty continuation schedule".into()));
        }
        if lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(Error::InvalidConfig("schedule values must be finite and >= 0".into()));
        }
        if lambdas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("schedule must be strictly increasing".into()));
        }
        Ok(Self { lambdas })
    }

    /// `steps` geometric values from `target / 100` to `target`.
    pub fn geometric(target: f64, steps: usize) -> Result<Self> {
        if target == 0.0 || steps <= 1 {
            return Self::new(vec![target]);
        }
        let start = target / 100.0;
        let ratio = (target / start).powf(1.0 / (steps - 1) as f64);
        let mut lambdas: Vec<f64> = (0..steps).map(|k| start * ratio.powi(k as i32)).collect();
        *lambdas.last_mut().expect("steps > 1") = target;
        Self::new(lambdas)
    }

    pub fn default_for(target: f64) -> Result<Self> {
        Self::geometric(target, 8)
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn target(&self) -> f64 {
        *self.lambdas.last().expect("non-empty")
    }
}

/// One restart: random start, then either a single solve or a continuation path.
fn run_restart(
    base: &RegularizedObjective,
    opt: &OptimizerConfig,
    schedule: Option<&ContinuationSchedule>,
    restart: usize,
) -> Result<FitResult> {
    let cfg = base.config();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(restart as u64));
    let normal = Normal::new(0.0, RESTART_INIT_STD).expect("valid std");
    let mut theta: Vec<f64> = (0..base.dim()).map(|_| normal.sample(&mut rng)).collect();

    let lambdas = match schedule {
        Some(s) => s.lambdas().to_vec(),
        None => vec![cfg.lambda],
    };
    let mut obj = base.clone();
    let mut trace = Vec::new();
    let mut offset = 0;
    let mut value = f64::NAN;
    for lambda in lambdas {
        obj.set_lambda(lambda);
        let m = maximize(&obj, &theta, opt)?;
        trace.extend(m.trace.iter().map(|(i, v)| (offset + i, *v)));
        offset += m.iterations + 1;
        theta = m.theta;
        value = m.value;
    }
    Ok(FitResult {
        theta: Theta::new(theta).map_err(|_| Error::Numerical("fit produced non-finite theta".into()))?,
        objective: value,
        trace,
        restart_index: restart,
    })
}

/// Fits the regularized logistic model, keeping the best of `restarts` runs.
///
/// Restart `r` draws its start from `N(0, 0.1² I)` seeded with `seed + r`.
/// With a schedule, each λ in turn is solved warm-started from the previous
/// solution; the schedule must end at `fit_config.lambda`.
pub fn fit(
    labeled: &LabeledDataset,
    unlabeled: &UnlabeledDataset,
    fit_config: &FitConfig,
    opt_config: &OptimizerConfig,
    schedule: Option<&ContinuationSchedule>,
) -> Result<FitResult> {
    opt_config.validate()?;
    let obj = RegularizedObjective::new(labeled, unlabeled, fit_config)?;
    if let Some(s) = schedule {
        if s.target() != fit_config.lambda {
            return Err(Error::InvalidConfig(format!(
                "schedule ends at {} but lambda is {}",
                s.target(),
                fit_config.lambda
            )));
        }
    }
    let runs: Vec<FitResult> = (0..fit_config.restarts)
        .into_par_iter()
        .map(|r| run_restart(&obj, opt_config, schedule, r))
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.objective > best.objective { r } else { best });
    Ok(best.expect("restarts >= 1"))
}

/// Per-restart results, in restart order. Mostly useful for diagnostics.
pub fn fit_all_restarts(
    labeled: &LabeledDataset,
    unlabeled: &UnlabeledDataset,
    fit_config: &FitConfig,
    opt_config: &OptimizerConfig,
    schedule: Option<&ContinuationSchedule>,
) -> Result<Vec<FitResult>> {
    opt_config.validate()?;
    let obj = RegularizedObjective::new(labeled, unlabeled, fit_config)?;
    (0..fit_config.restarts)
        .into_par_iter()
        .map(|r| run_restart(&obj, opt_config, schedule, r))
        .collect()
}
