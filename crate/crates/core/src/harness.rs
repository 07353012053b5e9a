//! Two-Gaussian semi-supervised experiment: data generation, per-trial
//! λ selection on fresh validation data, and aggregation across trials.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Label, LabeledDataset, UnlabeledDataset};
use crate::error::{Error, Result};
use crate::logistic::{FitConfig, Model, Regularizer};
use crate::optimize::{fit, ContinuationSchedule, OptimizerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    L2,
    InfoEmpirical,
    InfoKernel,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::L2, Method::InfoEmpirical, Method::InfoKernel];

    pub fn name(self) -> &'static str {
        match self {
            Method::L2 => "l2",
            Method::InfoEmpirical => "info_empirical",
            Method::InfoKernel => "info_kernel",
        }
    }

    pub fn regularizer(self) -> Regularizer {
        match self {
            Method::L2 => Regularizer::L2,
            Method::InfoEmpirical => Regularizer::InfoEmpirical,
            Method::InfoKernel => Regularizer::InfoKernel,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub n_labeled: usize,
    pub n_unlabeled: usize,
    pub n_test: usize,
    pub n_validation: usize,
    pub trials: usize,
    pub dim: usize,
    /// Distance between the class means along the first axis; ignored when
    /// `class_means` is given.
    pub mean_separation: f64,
    /// `[negative, positive]` class means.
    pub class_means: Option<[Vec<f64>; 2]>,
    /// Shared isotropic class variance.
    pub variance: f64,
    pub lambda_grid: Vec<f64>,
    pub tau: f64,
    pub methods: Vec<Method>,
    pub restarts: usize,
    pub bias: bool,
    pub continuation: bool,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_labeled: 5,
            n_unlabeled: 100,
            n_test: 2000,
            n_validation: 500,
            trials: 100,
            dim: 2,
            mean_separation: 2.0,
            class_means: None,
            variance: 1.0,
            lambda_grid: vec![0.01, 0.1, 1.0, 10.0, 100.0],
            tau: 0.25,
            methods: Method::ALL.to_vec(),
            restarts: 8,
            bias: false,
            continuation: false,
            seed: 0,
            parallel: true,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_labeled < 2 {
            return bad("n_labeled must be at least 2".into());
        }
        if self.n_unlabeled == 0 || self.n_test == 0 || self.n_validation == 0 {
            return bad("unlabeled, test and validation sizes must be positive".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        if self.lambda_grid.is_empty() || self.lambda_grid.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return bad("lambda_grid must be non-empty with finite values >= 0".into());
        }
        if !(self.variance > 0.0 && self.variance.is_finite()) {
            return bad(format!("variance must be positive, got {}", self.variance));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if self.restarts == 0 {
            return bad("restarts must be at least 1".into());
        }
        let [neg, pos] = self.means();
        if neg.len() != pos.len() || neg.is_empty() {
            return bad("class means must share a positive dimension".into());
        }
        if neg.iter().chain(&pos).any(|v| !v.is_finite()) || !self.mean_separation.is_finite() {
            return bad("class means must be finite".into());
        }
        Ok(())
    }

    /// `[negative, positive]` class means.
    pub fn means(&self) -> [Vec<f64>; 2] {
        if let Some(m) = &self.class_means {
            return m.clone();
        }
        let mut neg = vec![0.0; self.dim.max(1)];
        let mut pos = neg.clone();
        neg[0] = -0.5 * self.mean_separation;
        pos[0] = 0.5 * self.mean_separation;
        [neg, pos]
    }

    fn fit_config(&self, method: Method, lambda: f64, trial: usize) -> FitConfig {
        let mut cfg = FitConfig::new(method.regularizer(), lambda);
        if method == Method::InfoKernel {
            cfg.tau = Some(self.tau);
        }
        cfg.bias = self.bias;
        cfg.restarts = self.restarts;
        cfg.seed = stream_seed(self.seed, trial, Purpose::Fit);
        cfg
    }
}

#[derive(Debug, Clone, Copy)]
enum Purpose {
    Labeled = 1,
    Unlabeled = 2,
    Test = 3,
    Validation = 4,
    Fit = 5,
}

fn stream_rng(seed: u64, trial: usize, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((trial as u64) << 8) | purpose as u64);
    rng
}

fn stream_seed(seed: u64, trial: usize, purpose: Purpose) -> u64 {
    stream_rng(seed, trial, purpose).random()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialData {
    pub labeled: LabeledDataset,
    pub unlabeled: UnlabeledDataset,
    pub test: LabeledDataset,
    pub validation: LabeledDataset,
}

fn draw_labeled(rng: &mut impl Rng, n: usize, means: &[Vec<f64>; 2], sd: f64) -> LabeledDataset {
    let mut out = LabeledDataset::default();
    for _ in 0..n {
        let y = if rng.random::<bool>() { Label::Pos } else { Label::Neg };
        let mean = &means[usize::from(y == Label::Pos)];
        let x = mean.iter().map(|m| m + sd * rng.sample::<f64, _>(StandardNormal)).collect();
        out.push(x, y);
    }
    out
}

/// Data for one trial. Each set comes from its own stream keyed by
/// `(seed, trial, purpose)`; the labeled set is redrawn until both classes occur.
pub fn gen_two_gaussians(config: &ExperimentConfig, trial: usize) -> Result<TrialData> {
    config.validate()?;
    let means = config.means();
    let sd = config.variance.sqrt();
    let draw = |purpose, n| draw_labeled(&mut stream_rng(config.seed, trial, purpose), n, &means, sd);

    let mut rng = stream_rng(config.seed, trial, Purpose::Labeled);
    let labeled = loop {
        let l = draw_labeled(&mut rng, config.n_labeled, &means, sd);
        if l.has_both_labels() {
            break l;
        }
    };
    Ok(TrialData {
        labeled,
        unlabeled: UnlabeledDataset {
            points: draw(Purpose::Unlabeled, config.n_unlabeled).points,
        },
        test: draw(Purpose::Test, config.n_test),
        validation: draw(Purpose::Validation, config.n_validation),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub trial: usize,
    pub lambda: f64,
    pub validation_error: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    pub mean_error: f64,
    pub std_error: f64,
    pub trials: Vec<TrialResult>,
    pub failures: Vec<TrialFailure>,
}

impl MethodReport {
    pub fn errors(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.error).collect()
    }

    pub fn selected_lambdas(&self) -> Vec<f64> {
        self.trials.iter().map(|t| t.lambda).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub methods: Vec<MethodReport>,
    pub wall_time_secs: f64,
}

/// Difference of two method means with its pooled standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// `mean(a) - mean(b)`.
    pub gap: f64,
    /// `√(SE_a² + SE_b²)`.
    pub pooled_se: f64,
    /// Standard error of the per-trial differences, over trials both completed.
    pub paired_se: f64,
}

impl ExperimentReport {
    pub fn method(&self, m: Method) -> Option<&MethodReport> {
        self.methods.iter().find(|r| r.method == m)
    }

    pub fn compare(&self, a: Method, b: Method) -> Option<Comparison> {
        let (ra, rb) = (self.method(a)?, self.method(b)?);
        let diffs: Vec<f64> = ra
            .trials
            .iter()
            .filter_map(|t| rb.trials.iter().find(|u| u.trial == t.trial).map(|u| t.error - u.error))
            .collect();
        Some(Comparison {
            gap: ra.mean_error - rb.mean_error,
            pooled_se: ra.std_error.hypot(rb.std_error),
            paired_se: mean_and_se(&diffs).1,
        })
    }
}

/// Mean and standard error of the mean (sample standard deviation over √n).
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Fits every λ of the grid and keeps the one with the lowest validation
/// error (earliest on ties).
fn run_method(config: &ExperimentConfig, data: &TrialData, method: Method, trial: usize) -> Result<TrialResult> {
    let opt = OptimizerConfig::default();
    let mut best: Option<TrialResult> = None;
    let mut last_err = None;
    for &lambda in &config.lambda_grid {
        let fit_cfg = config.fit_config(method, lambda, trial);
        let schedule = if config.continuation {
            Some(ContinuationSchedule::default_for(lambda)?)
        } else {
            None
        };
        let fitted = match fit(&data.labeled, &data.unlabeled, &fit_cfg, &opt, schedule.as_ref()) {
            Ok(f) => f,
            Err(e) => {
                last_err = Some(e);
                continue;
            }
        };
        let model = Model::from_fit(&fitted, &fit_cfg);
        let validation_error = model.error_rate(&data.validation)?;
        if best.as_ref().is_none_or(|b| validation_error < b.validation_error) {
            best = Some(TrialResult {
                trial,
                lambda,
                validation_error,
                error: model.error_rate(&data.test)?,
            });
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::Numerical("no lambda produced a fit".into())))
}

type TrialOutcome = Vec<std::result::Result<TrialResult, String>>;

fn run_trial(config: &ExperimentConfig, trial: usize) -> Result<TrialOutcome> {
    let data = gen_two_gaussians(config, trial)?;
    let outcome: TrialOutcome = config
        .methods
        .iter()
        .map(|&m| run_method(config, &data, m, trial).map_err(|e| e.to_string()))
        .collect();
    if outcome.iter().all(|r| r.is_err()) {
        let msgs: Vec<String> = outcome.into_iter().filter_map(|r| r.err()).collect();
        return Err(Error::Numerical(format!("trial {trial}: every method failed: {}", msgs.join("; "))));
    }
    Ok(outcome)
}

/// Runs all trials and aggregates per method. Results do not depend on
/// whether trials run in parallel.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let outcomes: Vec<TrialOutcome> = if config.parallel {
        (0..config.trials).into_par_iter().map(|t| run_trial(config, t)).collect::<Result<_>>()?
    } else {
        (0..config.trials).map(|t| run_trial(config, t)).collect::<Result<_>>()?
    };

    let methods = config
        .methods
        .iter()
        .enumerate()
        .map(|(k, &method)| {
            let mut trials = Vec::new();
            let mut failures = Vec::new();
            for (t, outcome) in outcomes.iter().enumerate() {
                match &outcome[k] {
                    Ok(r) => trials.push(r.clone()),
                    Err(message) => failures.push(TrialFailure {
                        trial: t,
                        message: message.clone(),
                    }),
                }
            }
            let errors: Vec<f64> = trials.iter().map(|t| t.error).collect();
            let (mean_error, std_error) = mean_and_se(&errors);
            MethodReport {
                method,
                mean_error,
                std_error,
                trials,
                failures,
            }
        })
        .collect();
    Ok(ExperimentReport {
        config: config.clone(),
        methods,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Flat `method,trial,lambda,error` table, one row per completed trial.
pub fn report_csv(report: &ExperimentReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fmt = |e: csv::Error| Error::Format {
        path: "<csv>".into(),
        message: e.to_string(),
    };
    w.write_record(["method", "trial", "lambda", "error"]).map_err(fmt)?;
    for m in &report.methods {
        for t in &m.trials {
            w.write_record([m.method.name().to_string(), t.trial.to_string(), t.lambda.to_string(), t.error.to_string()])
                .map_err(fmt)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Format {
        path: "<csv>".into(),
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `report.json` and `errors.csv` into `dir`, creating it if needed.
pub fn emit_report(report: &ExperimentReport, dir: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let json_path = dir.join("report.json");
    let csv_path = dir.join("errors.csv");
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Format {
        path: json_path.display().to_string(),
        message: e.to_string(),
    })?;
    std::fs::write(&json_path, json).map_err(io_err(&json_path))?;
    std::fs::write(&csv_path, report_csv(report)?).map_err(io_err(&csv_path))?;
    Ok((json_path, csv_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            trials: 3,
            n_test: 200,
            n_validation: 100,
            restarts: 2,
            lambda_grid: vec![0.1, 1.0],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn generation_is_deterministic_and_has_both_labels() {
        let cfg = ExperimentConfig {
            n_labeled: 2,
            ..small()
        };
        for t in 0..20 {
            let a = gen_two_gaussians(&cfg, t).unwrap();
            assert!(a.labeled.has_both_labels());
            assert_eq!(a, gen_two_gaussians(&cfg, t).unwrap());
        }
        assert_ne!(gen_two_gaussians(&cfg, 0).unwrap(), gen_two_gaussians(&cfg, 1).unwrap());
    }

    #[test]
    fn means_from_separation() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.means(), [vec![-1.0, 0.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn single_trial_bookkeeping() {
        let cfg = ExperimentConfig {
            trials: 1,
            methods: vec![Method::L2],
            ..small()
        };
        let r = run_experiment(&cfg).unwrap();
        assert_eq!(r.methods.len(), 1);
        assert_eq!(r.methods[0].trials.len(), 1);
        assert_eq!(r.methods[0].std_error, 0.0);
        assert_eq!(report_csv(&r).unwrap().lines().count(), 2);
    }

    #[test]
    fn invalid_configs_rejected() {
        for cfg in [
            ExperimentConfig { trials: 0, ..small() },
            ExperimentConfig { n_labeled: 1, ..small() },
            ExperimentConfig { methods: vec![], ..small() },
            ExperimentConfig { lambda_grid: vec![-1.0], ..small() },
            ExperimentConfig { tau: 0.0, ..small() },
        ] {
            assert!(run_experiment(&cfg).is_err());
        }
    }

    #[test]
    fn mean_and_se_values() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
