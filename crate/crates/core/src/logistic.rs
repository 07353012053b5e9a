//! Logistic conditional `p(y|x; θ) = σ(y θᵀx)` with plain, L2 and
//! information regularization, and analytic gradients of every objective.
//!
//! The information regularizer for this model is
//! `‖θ‖² ∫ p(x) σ(θᵀx) σ(-θᵀx) dx`. Two finite-sample versions are provided:
//!
//! * empirical: the integral becomes an average over the unlabeled points;
//! * Gaussian kernel: `σσ` is replaced by `¼ exp(-s²/4)` and integrated in
//!   closed form against `N(x; x'_j, τI)` at every unlabeled point, giving
//!   `‖θ‖² / √c · (1/4m) Σ_j exp(-(θᵀx'_j)² / 4c)` with `c = 1 + τ‖θ‖²/2`.

use serde::{Deserialize, Serialize};

use crate::dataset::{LabeledDataset, UnlabeledDataset};
use crate::error::{Error, Result};
use crate::optimize::Objective;

/// Logistic parameters. The dimension is fixed when the vector is built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Theta(Vec<f64>);

impl Theta {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("theta must have dimension >= 1"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("theta entries must be finite"));
        }
        Ok(Self(weights))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim.max(1)])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Theta {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularizer {
    None,
    L2,
    InfoEmpirical,
    InfoKernel,
}

impl Regularizer {
    pub fn name(self) -> &'static str {
        match self {
            Regularizer::None => "none",
            Regularizer::L2 => "l2",
            Regularizer::InfoEmpirical => "info_empirical",
            Regularizer::InfoKernel => "info_kernel",
        }
    }

    pub fn uses_unlabeled(self) -> bool {
        matches!(self, Regularizer::InfoEmpirical | Regularizer::InfoKernel)
    }
}

impl std::fmt::Display for Regularizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub lambda: f64,
    pub regularizer: Regularizer,
    /// Kernel variance; required by, and only by, `InfoKernel`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Multiply the empirical regularizer by `‖θ‖²`.
    #[serde(default = "default_true")]
    pub include_theta_norm_factor: bool,
    /// Append a constant-1 feature.
    #[serde(default)]
    pub bias: bool,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_true() -> bool {
    true
}

fn default_restarts() -> usize {
    8
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            lambda: 0.0,
            regularizer: Regularizer::None,
            tau: None,
            include_theta_norm_factor: true,
            bias: false,
            restarts: default_restarts(),
            seed: 0,
        }
    }
}

impl FitConfig {
    pub fn new(regularizer: Regularizer, lambda: f64) -> Self {
        Self {
            regularizer,
            lambda,
            ..Self::default()
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::InvalidConfig(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be >= 1".into()));
        }
        match (self.regularizer, self.tau) {
            (Regularizer::InfoKernel, None) => {
                Err(Error::InvalidConfig("info_kernel requires tau".into()))
            }
            (Regularizer::InfoKernel, Some(t)) if !(t.is_finite() && t > 0.0) => {
                Err(Error::InvalidConfig(format!("tau must be positive, got {t}")))
            }
            (Regularizer::InfoKernel, Some(_)) => Ok(()),
            (r, Some(_)) => Err(Error::InvalidConfig(format!("tau is only used by info_kernel, not {r}"))),
            (_, None) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub theta: Theta,
    pub objective: f64,
    pub trace: Vec<(usize, f64)>,
    pub restart_index: usize,
}

/// On-disk model: `{"theta": [...], "bias": bool, "config": {...}, "objective": value}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model {
    pub theta: Theta,
    pub bias: bool,
    pub config: FitConfig,
    pub objective: f64,
}

impl Model {
    pub fn from_fit(fit: &FitResult, config: &FitConfig) -> Self {
        Self {
            theta: fit.theta.clone(),
            bias: config.bias,
            config: config.clone(),
            objective: fit.objective,
        }
    }

    /// `p(y = +1 | x)` for a raw (non-augmented) feature vector.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        predict(&self.theta, &augment(x, self.bias))
    }

    pub fn error_rate(&self, test: &LabeledDataset) -> Result<f64> {
        error_rate(&self.theta, &augment_labeled(test, self.bias))
    }
}

pub fn sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    }
}

/// `log σ(s)`, finite for every finite `s`.
pub fn log_sigmoid(s: f64) -> f64 {
    if s >= 0.0 {
        -(-s).exp().ln_1p()
    } else {
        s - s.exp().ln_1p()
    }
}

/// `σ(s) σ(-s)`, the weight the Fisher information puts near the boundary.
pub fn sigma_product(s: f64) -> f64 {
    let e = (-s.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}

/// Derivative of [`sigma_product`]: `σσ(s) (σ(-s) - σ(s))`.
fn sigma_product_derivative(s: f64) -> f64 {
    sigma_product(s) * (-0.5 * s).tanh()
}

/// Gaussian approximation `¼ exp(-s²/4)` of [`sigma_product`].
pub fn gauss_approx_sigma_product(s: f64) -> f64 {
    0.25 * (-0.25 * s * s).exp()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

fn check_dim(theta: &[f64], x: &[f64]) -> Result<()> {
    if theta.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            got: x.len(),
        });
    }
    Ok(())
}

fn check_points(theta: &[f64], points: &[Vec<f64>]) -> Result<()> {
    points.iter().try_for_each(|x| check_dim(theta, x))
}

/// Appends the constant bias feature when `bias` is set.
pub fn augment(x: &[f64], bias: bool) -> Vec<f64> {
    let mut v = x.to_vec();
    if bias {
        v.push(1.0);
    }
    v
}

pub fn augment_labeled(data: &LabeledDataset, bias: bool) -> LabeledDataset {
    LabeledDataset {
        points: data.points.iter().map(|x| augment(x, bias)).collect(),
        labels: data.labels.clone(),
    }
}

pub fn augment_unlabeled(data: &UnlabeledDataset, bias: bool) -> UnlabeledDataset {
    UnlabeledDataset {
        points: data.points.iter().map(|x| augment(x, bias)).collect(),
    }
}

pub fn predict(theta: &Theta, x: &[f64]) -> Result<f64> {
    check_dim(theta.as_slice(), x)?;
    Ok(sigmoid(dot(theta.as_slice(), x)))
}

pub fn log_likelihood(theta: &Theta, labeled: &LabeledDataset) -> Result<f64> {
    if labeled.is_empty() {
        return Err(Error::EmptyDataset("log-likelihood needs labeled points"));
    }
    check_points(theta.as_slice(), &labeled.points)?;
    Ok(labeled
        .iter()
        .map(|(x, y)| log_sigmoid(y.sign() * dot(theta.as_slice(), x)))
        .sum())
}

/// `Tr F(x; θ) = ‖θ‖² σ(θᵀx) σ(-θᵀx)`.
pub fn fisher_trace(theta: &Theta, x: &[f64]) -> Result<f64> {
    check_dim(theta.as_slice(), x)?;
    Ok(theta.norm_sq() * sigma_product(dot(theta.as_slice(), x)))
}

pub fn info_reg_empirical(
    theta: &Theta,
    unlabeled: &UnlabeledDataset,
    include_theta_norm_factor: bool,
) -> Result<f64> {
    if unlabeled.is_empty() {
        return Err(Error::EmptyDataset("information regularizer needs unlabeled points"));
    }
    check_points(theta.as_slice(), &unlabeled.points)?;
    Ok(empirical_value_grad(theta.as_slice(), &unlabeled.points, include_theta_norm_factor, false).0)
}

pub fn info_reg_kernel(theta: &Theta, unlabeled: &UnlabeledDataset, tau: f64) -> Result<f64> {
    if unlabeled.is_empty() {
        return Err(Error::EmptyDataset("information regularizer needs unlabeled points"));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::invalid(format!("tau must be positive, got {tau}")));
    }
    check_points(theta.as_slice(), &unlabeled.points)?;
    Ok(kernel_value_grad(theta.as_slice(), &unlabeled.points, tau, false).0)
}

fn empirical_value_grad(
    theta: &[f64],
    points: &[Vec<f64>],
    norm_factor: bool,
    want_grad: bool,
) -> (f64, Vec<f64>) {
    let m = points.len() as f64;
    let mut avg = 0.0;
    let mut avg_grad = vec![0.0; if want_grad { theta.len() } else { 0 }];
    for x in points {
        let s = dot(theta, x);
        avg += sigma_product(s);
        if want_grad {
            let dq = sigma_product_derivative(s);
            avg_grad.iter_mut().zip(x).for_each(|(g, xi)| *g += dq * xi);
        }
    }
    avg /= m;
    avg_grad.iter_mut().for_each(|g| *g /= m);
    if !norm_factor {
        return (avg, avg_grad);
    }
    let n2 = norm_sq(theta);
    if want_grad {
        for (g, t) in avg_grad.iter_mut().zip(theta) {
            *g = 2.0 * t * avg + n2 * *g;
        }
    }
    (n2 * avg, avg_grad)
}

fn kernel_value_grad(theta: &[f64], points: &[Vec<f64>], tau: f64, want_grad: bool) -> (f64, Vec<f64>) {
    let m = points.len() as f64;
    let n2 = norm_sq(theta);
    let c = 1.0 + 0.5 * tau * n2;
    let scale = n2 / c.sqrt();

    // e = (1/4m) Σ exp(-s²/4c); de = ∇e.
    let mut e = 0.0;
    let mut de_x = vec![0.0; if want_grad { theta.len() } else { 0 }];
    let mut de_theta = 0.0;
    for x in points {
        let s = dot(theta, x);
        let ej = (-0.25 * s * s / c).exp();
        e += ej;
        if want_grad {
            let a = -ej * s / (2.0 * c);
            de_x.iter_mut().zip(x).for_each(|(g, xi)| *g += a * xi);
            de_theta += ej * s * s * tau / (4.0 * c * c);
        }
    }
    let norm = 1.0 / (4.0 * m);
    e *= norm;
    if !want_grad {
        return (scale * e, Vec::new());
    }
    // ∇(‖θ‖² c^{-1/2}) = θ (2 c^{-1/2} - ½ τ ‖θ‖² c^{-3/2})
    let dscale = 2.0 / c.sqrt() - 0.5 * tau * n2 / (c * c.sqrt());
    let grad = theta
        .iter()
        .zip(&de_x)
        .map(|(t, gx)| dscale * t * e + scale * norm * (gx + de_theta * t))
        .collect();
    (scale * e, grad)
}

/// Regularized log-likelihood `Σ log σ(y_i θᵀx_i) - λ R(θ)` over prepared data.
///
/// Points are stored already augmented with the bias feature when the
/// configuration asks for one; `theta` then has one extra coordinate.
#[derive(Debug, Clone)]
pub struct RegularizedObjective {
    labeled: LabeledDataset,
    unlabeled: UnlabeledDataset,
    config: FitConfig,
    dim: usize,
}

impl RegularizedObjective {
    pub fn new(labeled: &LabeledDataset, unlabeled: &UnlabeledDataset, config: &FitConfig) -> Result<Self> {
        config.validate()?;
        if labeled.is_empty() {
            return Err(Error::EmptyDataset("fitting needs labeled points"));
        }
        if config.regularizer.uses_unlabeled() && unlabeled.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "{} needs a non-empty unlabeled set",
                config.regularizer
            )));
        }
        let d = labeled.dim().expect("non-empty");
        if let Some(du) = unlabeled.dim() {
            if du != d {
                return Err(Error::DimensionMismatch { expected: d, got: du });
            }
        }
        Ok(Self {
            labeled: augment_labeled(labeled, config.bias),
            unlabeled: augment_unlabeled(unlabeled, config.bias),
            config: config.clone(),
            dim: d + usize::from(config.bias),
        })
    }

    pub fn config(&self) -> &FitConfig {
        &self.config
    }

    pub fn set_lambda(&mut self, lambda: f64) {
        self.config.lambda = lambda;
    }

    fn log_lik(&self, theta: &[f64]) -> f64 {
        self.labeled
            .iter()
            .map(|(x, y)| log_sigmoid(y.sign() * dot(theta, x)))
            .sum()
    }

    fn log_lik_grad(&self, theta: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; theta.len()];
        for (x, y) in self.labeled.iter() {
            let w = y.sign() * sigmoid(-y.sign() * dot(theta, x));
            g.iter_mut().zip(x).for_each(|(gi, xi)| *gi += w * xi);
        }
        g
    }

    /// Regularizer value and (optionally) gradient, without λ.
    pub fn regularizer(&self, theta: &[f64], want_grad: bool) -> (f64, Vec<f64>) {
        let pts = &self.unlabeled.points;
        match self.config.regularizer {
            Regularizer::None => (0.0, vec![0.0; if want_grad { theta.len() } else { 0 }]),
            Regularizer::L2 => (
                norm_sq(theta),
                if want_grad { theta.iter().map(|t| 2.0 * t).collect() } else { Vec::new() },
            ),
            Regularizer::InfoEmpirical => {
                empirical_value_grad(theta, pts, self.config.include_theta_norm_factor, want_grad)
            }
            Regularizer::InfoKernel => {
                kernel_value_grad(theta, pts, self.config.tau.expect("validated"), want_grad)
            }
        }
    }
}

impl Objective for RegularizedObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, theta: &[f64]) -> f64 {
        let ll = self.log_lik(theta);
        if self.config.lambda == 0.0 {
            return ll;
        }
        ll - self.config.lambda * self.regularizer(theta, false).0
    }

    fn gradient(&self, theta: &[f64]) -> Vec<f64> {
        let mut g = self.log_lik_grad(theta);
        if self.config.lambda != 0.0 {
            let (_, rg) = self.regularizer(theta, true);
            g.iter_mut().zip(rg).for_each(|(gi, r)| *gi -= self.config.lambda * r);
        }
        g
    }
}

pub fn objective(
    theta: &Theta,
    labeled: &LabeledDataset,
    unlabeled: &UnlabeledDataset,
    config: &FitConfig,
) -> Result<f64> {
    let obj = RegularizedObjective::new(labeled, unlabeled, config)?;
    check_dim(&vec![0.0; obj.dim], theta.as_slice())?;
    Ok(obj.value(theta.as_slice()))
}

pub fn objective_gradient(
    theta: &Theta,
    labeled: &LabeledDataset,
    unlabeled: &UnlabeledDataset,
    config: &FitConfig,
) -> Result<Vec<f64>> {
    let obj = RegularizedObjective::new(labeled, unlabeled, config)?;
    check_dim(&vec![0.0; obj.dim], theta.as_slice())?;
    Ok(obj.gradient(theta.as_slice()))
}

/// Fraction of points with `sign(θᵀx) != y`; `θᵀx = 0` counts as an error.
pub fn error_rate(theta: &Theta, test: &LabeledDataset) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyDataset("error rate needs test points"));
    }
    check_points(theta.as_slice(), &test.points)?;
    let wrong = test
        .iter()
        .filter(|(x, y)| y.sign() * dot(theta.as_slice(), x) <= 0.0)
        .count();
    Ok(wrong as f64 / test.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Label;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn th(v: &[f64]) -> Theta {
        Theta::new(v.to_vec()).unwrap()
    }

    fn unl(points: &[&[f64]]) -> UnlabeledDataset {
        UnlabeledDataset::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn predict_examples() {
        assert_eq!(predict(&th(&[0.0, 0.0]), &[3.0, -4.0]).unwrap(), 0.5);
        assert_relative_eq!(predict(&th(&[1.0]), &[1.0]).unwrap(), 0.731_058_578_630_004_9, max_relative = 1e-14);
        assert!(predict(&th(&[1.0]), &[-500.0]).unwrap() > 0.0);
        assert!(log_sigmoid(-500.0).is_finite());
        assert!(predict(&th(&[1.0]), &[1.0, 2.0]).is_err());
    }

    #[test]
    fn log_likelihood_examples() {
        let data = LabeledDataset::new(
            vec![vec![1.0, 2.0], vec![-1.0, 0.5], vec![3.0, 3.0]],
            vec![Label::Pos, Label::Neg, Label::Pos],
        )
        .unwrap();
        assert_relative_eq!(
            log_likelihood(&th(&[0.0, 0.0]), &data).unwrap(),
            3.0 * 0.5f64.ln(),
            max_relative = 1e-15
        );
        let one = LabeledDataset::new(vec![vec![1.0]], vec![Label::Pos]).unwrap();
        assert_relative_eq!(log_likelihood(&th(&[1.0]), &one).unwrap(), -0.313_261_687_518_222_9, max_relative = 1e-14);

        let t = th(&[0.3, -0.7]);
        let mut doubled = data.clone();
        for (x, y) in data.iter() {
            doubled.push(x.to_vec(), y);
        }
        let single = log_likelihood(&t, &data).unwrap();
        assert_relative_eq!(log_likelihood(&t, &doubled).unwrap(), 2.0 * single, max_relative = 1e-15);
        assert!(log_likelihood(&t, &LabeledDataset::default()).is_err());
    }

    #[test]
    fn sigma_product_examples() {
        assert_eq!(sigma_product(0.0), 0.25);
        assert_relative_eq!(sigma_product(1.0), 0.196_611_933_241_481_85, max_relative = 1e-14);
        assert_eq!(sigma_product(-1.0), sigma_product(1.0));
        assert_eq!(gauss_approx_sigma_product(0.0), 0.25);
        assert_relative_eq!(gauss_approx_sigma_product(1.0), 0.194_700_195_767_851_6, max_relative = 1e-14);
        let gap = (gauss_approx_sigma_product(1.0) - sigma_product(1.0)).abs();
        assert!((gap - 0.00191).abs() < 5e-6, "gap {gap}");
    }

    #[test]
    fn gauss_approximation_error_is_bounded_on_grid() {
        let n = 100_000;
        let worst = (0..=n)
            .map(|i| -10.0 + 20.0 * i as f64 / n as f64)
            .map(|s| (sigma_product(s) - gauss_approx_sigma_product(s)).abs())
            .fold(0.0, f64::max);
        // Grid maximum is 0.018896, attained near |s| = 2.9.
        assert!(worst <= 0.0189, "max gap {worst}");
        assert!(worst >= 0.0188, "max gap {worst}");
    }

    #[test]
    fn fisher_trace_examples() {
        assert_eq!(fisher_trace(&th(&[0.0, 0.0]), &[1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(fisher_trace(&th(&[0.6, 0.8]), &[0.8, -0.6]).unwrap(), 0.25);
        let t = th(&[2.0, 0.0]);
        assert_relative_eq!(fisher_trace(&t, &[0.5, 9.0]).unwrap(), 0.786_447_732_965_927_4, max_relative = 1e-14);
    }

    #[test]
    fn empirical_regularizer_examples() {
        let u = unl(&[&[1.0, 2.0], &[-3.0, 0.5]]);
        let zero = th(&[0.0, 0.0]);
        assert_eq!(info_reg_empirical(&zero, &u, true).unwrap(), 0.0);
        assert_eq!(info_reg_empirical(&zero, &u, false).unwrap(), 0.25);
        let one = unl(&[&[1.0, 0.0]]);
        assert_relative_eq!(
            info_reg_empirical(&th(&[1.0, 0.0]), &one, true).unwrap(),
            0.196_611_933_241_481_85,
            max_relative = 1e-14
        );
        assert!(info_reg_empirical(&zero, &UnlabeledDataset::default(), true).is_err());
    }

    #[test]
    fn kernel_regularizer_examples() {
        let one = unl(&[&[1.0, 0.0]]);
        assert_eq!(info_reg_kernel(&th(&[0.0, 0.0]), &one, 0.5).unwrap(), 0.0);
        // Closed form: 1/sqrt(1.25) * 1/4 * exp(-1/5).
        let v = info_reg_kernel(&th(&[1.0, 0.0]), &one, 0.5).unwrap();
        assert_relative_eq!(v, 0.25 * (-0.2f64).exp() / 1.25f64.sqrt(), max_relative = 1e-14);
        assert!((v - 0.18307).abs() < 5e-6);
        assert!(info_reg_kernel(&th(&[1.0, 0.0]), &one, 0.0).is_err());
        assert!(info_reg_kernel(&th(&[1.0, 0.0]), &UnlabeledDataset::default(), 1.0).is_err());
    }

    #[test]
    fn kernel_regularizer_small_tau_limit() {
        let u = unl(&[&[0.4, -1.0], &[2.0, 0.3], &[-0.7, 0.1]]);
        let t = th(&[1.3, -0.4]);
        let limit = t.norm_sq() / (4.0 * 3.0)
            * u.points.iter().map(|x| (-0.25 * dot(t.as_slice(), x).powi(2)).exp()).sum::<f64>();
        let v = info_reg_kernel(&t, &u, 1e-12).unwrap();
        assert!(((v - limit) / limit).abs() <= 1e-6);
    }

    #[test]
    fn error_rate_examples() {
        let data = LabeledDataset::new(
            vec![vec![1.0, 0.0], vec![2.0, 1.0], vec![-1.0, 0.3], vec![-0.5, -2.0]],
            vec![Label::Pos, Label::Pos, Label::Neg, Label::Neg],
        )
        .unwrap();
        assert_eq!(error_rate(&th(&[0.0, 0.0]), &data).unwrap(), 1.0);
        let sep = th(&[1.0, 0.0]);
        assert_eq!(error_rate(&sep, &data).unwrap(), 0.0);
        assert_eq!(error_rate(&sep, &data.with_flipped_labels()).unwrap(), 1.0);
        assert!(error_rate(&sep, &LabeledDataset::default()).is_err());
    }

    #[test]
    fn config_consistency() {
        assert!(FitConfig::new(Regularizer::InfoKernel, 1.0).validate().is_err());
        assert!(FitConfig::new(Regularizer::InfoKernel, 1.0).with_tau(0.25).validate().is_ok());
        assert!(FitConfig::new(Regularizer::L2, 1.0).with_tau(0.25).validate().is_err());
        assert!(FitConfig::new(Regularizer::L2, -1.0).validate().is_err());
        let l = LabeledDataset::new(vec![vec![1.0]], vec![Label::Pos]).unwrap();
        let cfg = FitConfig::new(Regularizer::InfoEmpirical, 1.0);
        assert!(RegularizedObjective::new(&l, &UnlabeledDataset::default(), &cfg).is_err());
    }

    fn random_problem(rng: &mut ChaCha8Rng, d: usize, n: usize, m: usize) -> (LabeledDataset, UnlabeledDataset) {
        let mut l = LabeledDataset::default();
        for _ in 0..n {
            let x = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
            l.push(x, if rng.random_bool(0.5) { Label::Pos } else { Label::Neg });
        }
        let u = UnlabeledDataset::new(
            (0..m).map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).collect(),
        )
        .unwrap();
        (l, u)
    }

    #[test]
    fn zero_theta_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (l, u) = random_problem(&mut rng, 3, 10, 20);
        let obj = RegularizedObjective::new(&l, &u, &FitConfig::new(Regularizer::InfoEmpirical, 1.0)).unwrap();
        let (_, rg) = obj.regularizer(&[0.0; 3], true);
        assert!(rg.iter().all(|g| *g == 0.0));

        let obj = RegularizedObjective::new(&l, &u, &FitConfig::new(Regularizer::None, 0.0)).unwrap();
        let g = obj.gradient(&[0.0; 3]);
        for k in 0..3 {
            let expect: f64 = 0.5 * l.iter().map(|(x, y)| y.sign() * x[k]).sum::<f64>();
            assert_relative_eq!(g[k], expect, max_relative = 1e-14);
        }
    }

    #[test]
    fn lambda_zero_objective_is_log_likelihood() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (l, u) = random_problem(&mut rng, 2, 8, 8);
        let t = th(&[0.7, -1.1]);
        let ll = log_likelihood(&t, &l).unwrap();
        for reg in [Regularizer::None, Regularizer::L2, Regularizer::InfoEmpirical] {
            assert_eq!(objective(&t, &l, &u, &FitConfig::new(reg, 0.0)).unwrap(), ll);
        }
        let k = FitConfig::new(Regularizer::InfoKernel, 0.0).with_tau(0.3);
        assert_eq!(objective(&t, &l, &u, &k).unwrap(), ll);
    }

    #[test]
    fn bias_feature_extends_theta() {
        let l = LabeledDataset::new(vec![vec![1.0], vec![-1.0]], vec![Label::Pos, Label::Neg]).unwrap();
        let mut cfg = FitConfig::new(Regularizer::L2, 1.0);
        cfg.bias = true;
        let obj = RegularizedObjective::new(&l, &UnlabeledDataset::default(), &cfg).unwrap();
        assert_eq!(obj.dim(), 2);
        assert!(objective(&th(&[1.0]), &l, &UnlabeledDataset::default(), &cfg).is_err());
        assert!(objective(&th(&[1.0, 0.5]), &l, &UnlabeledDataset::default(), &cfg).is_ok());
    }

    fn rotation(rng: &mut ChaCha8Rng) -> [[f64; 2]; 2] {
        let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        [[a.cos(), -a.sin()], [a.sin(), a.cos()]]
    }

    proptest! {
        #[test]
        fn regularizers_nonnegative_and_vanish_at_zero(
            t in prop::collection::vec(-4.0f64..4.0, 3),
            pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 1..15),
            tau in 0.01f64..3.0,
        ) {
            let u = UnlabeledDataset::new(pts).unwrap();
            let t = th(&t);
            prop_assert!(info_reg_empirical(&t, &u, true).unwrap() >= 0.0);
            prop_assert!(info_reg_empirical(&t, &u, false).unwrap() >= 0.0);
            prop_assert!(info_reg_kernel(&t, &u, tau).unwrap() >= 0.0);
            let z = Theta::zeros(3);
            prop_assert_eq!(info_reg_empirical(&z, &u, true).unwrap(), 0.0);
            prop_assert_eq!(info_reg_kernel(&z, &u, tau).unwrap(), 0.0);
        }

        #[test]
        fn kernel_regularizer_is_rotation_invariant(
            seed in 0u64..10_000,
            t in prop::collection::vec(-3.0f64..3.0, 2),
            pts in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 2), 1..10),
            tau in 0.01f64..3.0,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = rotation(&mut rng);
            let rot = |v: &[f64]| vec![r[0][0] * v[0] + r[0][1] * v[1], r[1][0] * v[0] + r[1][1] * v[1]];
            let before = info_reg_kernel(&th(&t), &UnlabeledDataset::new(pts.clone()).unwrap(), tau).unwrap();
            let rpts = pts.iter().map(|p| rot(p)).collect();
            let after = info_reg_kernel(&th(&rot(&t)), &UnlabeledDataset::new(rpts).unwrap(), tau).unwrap();
            prop_assert!((before - after).abs() <= 1e-12);
        }
    }
}
