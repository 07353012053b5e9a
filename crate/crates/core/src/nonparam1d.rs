//! Nonparametric information regularization in one dimension.
//!
//! With `f(x) = p(y=1|x)` and `g(f) = -2 arctan √(1/f - 1)`, the regularizer
//! `∫ p (f')² / (f(1-f)) dx` equals `∫ p (g')² dx`. Between two labeled
//! locations its minimizer is linear in `g` against the reciprocal-density
//! arc length `∫ dx/p`, and the minimal value on `[a, b]` is
//! `(g(f_b) - g(f_a))² / ∫_a^b dx/p`. Anchor values are then chosen by
//! maximizing the clamped log-likelihood minus `λ` times the summed interval
//! penalties, which is concave in `g`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::density::Density;
use crate::error::{Error, Result};
use crate::quadrature::QuadConfig;

/// Anchor conditionals are kept in `[CLAMP, 1 - CLAMP]`.
pub const CLAMP: f64 = 1e-6;
/// Projected-gradient tolerance of [`fit_anchors`], in `g` coordinates.
pub const ANCHOR_GRAD_TOL: f64 = 1e-8;

/// `g(f) = -2 arctan √(1/f - 1)`, mapping `(0, 1)` onto `(-π, 0)`.
pub fn g_transform(f: f64) -> f64 {
    let f = f.clamp(f64::MIN_POSITIVE, 1.0);
    -2.0 * (1.0 / f - 1.0).sqrt().atan()
}

/// Inverse of [`g_transform`]: `cos²(g/2)`.
pub fn g_inverse(g: f64) -> f64 {
    let c = (0.5 * g).cos();
    c * c
}

/// Minimal regularizer on an interval whose endpoints carry `f_a`, `f_b`
/// and whose reciprocal-density integral is `recint`.
pub fn interval_regularizer(f_a: f64, f_b: f64, recint: f64) -> Result<f64> {
    if !(recint > 0.0 && recint.is_finite()) {
        return Err(Error::invalid(format!("reciprocal integral must be positive, got {recint}")));
    }
    let dg = g_transform(f_b) - g_transform(f_a);
    Ok(dg * dg / recint)
}

/// Labeled 1D locations, merged so that each distinct `x` appears once with
/// its per-class counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnchorSet {
    locations: Vec<f64>,
    positives: Vec<usize>,
    negatives: Vec<usize>,
}

impl AnchorSet {
    pub fn new(anchors: &[(f64, Label)]) -> Result<Self> {
        if anchors.is_empty() {
            return Err(Error::invalid("need at least one anchor"));
        }
        if anchors.iter().any(|(x, _)| !x.is_finite()) {
            return Err(Error::invalid("anchor locations must be finite"));
        }
        let mut sorted = anchors.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut set = AnchorSet {
            locations: Vec::new(),
            positives: Vec::new(),
            negatives: Vec::new(),
        };
        for (x, y) in sorted {
            if set.locations.last() != Some(&x) {
                set.locations.push(x);
                set.positives.push(0);
                set.negatives.push(0);
            }
            let k = set.locations.len() - 1;
            match y {
                Label::Pos => set.positives[k] += 1,
                Label::Neg => set.negatives[k] += 1,
            }
        }
        Ok(set)
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn counts(&self, k: usize) -> (usize, usize) {
        (self.positives[k], self.negatives[k])
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }
}

/// Piecewise minimal-regularizer conditional through fixed anchor values.
///
/// Intervals across which `∫ dx/p` diverges (the density vanishes somewhere
/// inside) are disconnected: they carry no penalty and the conditional stays
/// at the left value up to the zero-density point, then at the right value.
#[derive(Debug, Clone)]
pub struct Conditional1D {
    density: Density,
    locations: Vec<f64>,
    values: Vec<f64>,
    g: Vec<f64>,
    /// `None` marks a disconnected interval.
    recints: Vec<Option<f64>>,
    quad: QuadConfig,
}

impl Conditional1D {
    pub fn new(density: Density, locations: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::with_quadrature(density, locations, values, QuadConfig::default())
    }

    pub fn with_quadrature(
        density: Density,
        locations: Vec<f64>,
        values: Vec<f64>,
        quad: QuadConfig,
    ) -> Result<Self> {
        if density.dim() != 1 || matches!(density, Density::Empirical { .. }) {
            return Err(Error::Unsupported {
                op: "conditional",
                kind: "non-1D or empirical",
            });
        }
        if locations.is_empty() || locations.len() != values.len() {
            return Err(Error::invalid("need one value per location and at least one location"));
        }
        if locations.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("locations must be strictly increasing"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("conditional values must lie in [0, 1]"));
        }
        let values: Vec<f64> = values.iter().map(|v| v.clamp(CLAMP, 1.0 - CLAMP)).collect();
        let g = values.iter().map(|&v| g_transform(v)).collect();
        let recints = locations
            .windows(2)
            .map(|w| match density.reciprocal_integral_with(w[0], w[1], &quad) {
                Ok(r) => Ok(Some(r)),
                Err(Error::Divergent { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            density,
            locations,
            values,
            g,
            recints,
            quad,
        })
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Reciprocal-density integral of each interval, `None` if disconnected.
    pub fn interval_recints(&self) -> &[Option<f64>] {
        &self.recints
    }

    /// `p(y = 1 | x)`.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let n = self.locations.len();
        if x <= self.locations[0] {
            return Ok(self.values[0]);
        }
        if x >= self.locations[n - 1] {
            return Ok(self.values[n - 1]);
        }
        let k = self.locations.partition_point(|&l| l <= x) - 1;
        let left = self.locations[k];
        if x == left {
            return Ok(self.values[k]);
        }
        let partial = self.density.reciprocal_integral_with(left, x, &self.quad);
        match (self.recints[k], partial) {
            (None, Ok(_)) => Ok(self.values[k]),
            (None, Err(Error::Divergent { .. })) => Ok(self.values[k + 1]),
            (Some(total), Ok(part)) => {
                let r = (part / total).clamp(0.0, 1.0);
                Ok(g_inverse(self.g[k] + (self.g[k + 1] - self.g[k]) * r))
            }
            (_, Err(e)) => Err(e),
        }
    }

    /// Sum of the minimal interval penalties; tails and disconnected
    /// intervals contribute nothing.
    pub fn total_regularizer(&self) -> f64 {
        self.g
            .windows(2)
            .zip(&self.recints)
            .filter_map(|(w, r)| r.map(|r| (w[1] - w[0]).powi(2) / r))
            .sum()
    }

    /// `grid` evenly spaced `(x, f(x))` pairs spanning the anchor range.
    pub fn emit_curve(&self, grid: usize) -> Result<Vec<(f64, f64)>> {
        if grid < 2 {
            return Err(Error::invalid("curve grid needs at least 2 points"));
        }
        let lo = self.locations[0];
        let hi = *self.locations.last().expect("non-empty");
        (0..grid)
            .map(|i| {
                let x = if i == grid - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (grid - 1) as f64
                };
                Ok((x, self.evaluate(x)?))
            })
            .collect()
    }
}

/// Residual of the 1D Euler–Lagrange condition
/// `(log p)' f' + f'' + ½ (2f - 1)/(f(1-f)) (f')²` at `x`, all derivatives
/// by central differences with step `h`.
pub fn euler_lagrange_residual(cond: &Conditional1D, x: f64, h: f64) -> Result<f64> {
    let f0 = cond.evaluate(x)?;
    let fp = cond.evaluate(x + h)?;
    let fm = cond.evaluate(x - h)?;
    let d1 = (fp - fm) / (2.0 * h);
    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
    let p = |t: f64| cond.density.pdf_1d(t);
    let dlogp = (p(x + h)?.ln() - p(x - h)?.ln()) / (2.0 * h);
    Ok(dlogp * d1 + d2 + 0.5 * (2.0 * f0 - 1.0) / (f0 * (1.0 - f0)) * d1 * d1)
}

#[derive(Debug, Clone)]
pub struct AnchorFit {
    pub conditional: Conditional1D,
    /// Clamped log-likelihood minus `λ` times the total regularizer.
    pub objective: f64,
    pub regularizer: f64,
    /// Projected gradient norm in `g` coordinates at the returned point.
    pub grad_norm: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnchorSummary {
    pub objective: f64,
    pub regularizer: f64,
    pub anchor_values: Vec<f64>,
}

impl AnchorFit {
    pub fn summary(&self) -> AnchorSummary {
        AnchorSummary {
            objective: self.objective,
            regularizer: self.regularizer,
            anchor_values: self.conditional.values().to_vec(),
        }
    }
}

struct AnchorProblem<'a> {
    anchors: &'a AnchorSet,
    /// `λ / recint` per interval, zero when disconnected.
    coupling: Vec<f64>,
    lower: f64,
    upper: f64,
}

impl AnchorProblem<'_> {
    fn value(&self, g: &[f64]) -> f64 {
        let mut v = 0.0;
        for (k, &gk) in g.iter().enumerate() {
            let (pos, neg) = self.anchors.counts(k);
            let half = 0.5 * gk;
            if pos > 0 {
                v += pos as f64 * 2.0 * half.cos().ln();
            }
            if neg > 0 {
                v += neg as f64 * 2.0 * (-half.sin()).ln();
            }
        }
        for (k, w) in self.coupling.iter().enumerate() {
            v -= w * (g[k + 1] - g[k]).powi(2);
        }
        v
    }

    fn gradient(&self, g: &[f64]) -> Vec<f64> {
        let mut grad: Vec<f64> = g
            .iter()
            .enumerate()
            .map(|(k, &gk)| {
                let (pos, neg) = self.anchors.counts(k);
                let half = 0.5 * gk;
                -(pos as f64) * half.tan() + neg as f64 / half.tan()
            })
            .collect();
        for (k, w) in self.coupling.iter().enumerate() {
            let d = 2.0 * w * (g[k + 1] - g[k]);
            grad[k] += d;
            grad[k + 1] -= d;
        }
        grad
    }

    fn hessian(&self, g: &[f64]) -> DMatrix<f64> {
        let n = g.len();
        let mut h = DMatrix::zeros(n, n);
        for (k, &gk) in g.iter().enumerate() {
            let (pos, neg) = self.anchors.counts(k);
            let half = 0.5 * gk;
            h[(k, k)] = -(pos as f64) / (2.0 * half.cos().powi(2)) - neg as f64 / (2.0 * half.sin().powi(2));
        }
        for (k, w) in self.coupling.iter().enumerate() {
            h[(k, k)] -= 2.0 * w;
            h[(k + 1, k + 1)] -= 2.0 * w;
            h[(k, k + 1)] += 2.0 * w;
            h[(k + 1, k)] += 2.0 * w;
        }
        h
    }

    fn free(&self, g: f64, grad: f64) -> bool {
        !((g <= self.lower && grad < 0.0) || (g >= self.upper && grad > 0.0))
    }

    fn projected_norm(&self, g: &[f64], grad: &[f64]) -> f64 {
        g.iter()
            .zip(grad)
            .filter(|(gk, dk)| self.free(**gk, **dk))
            .map(|(_, d)| d * d)
            .sum::<f64>()
            .sqrt()
    }
}

/// Chooses anchor conditionals maximizing
/// `Σ_i log f(x_i)^{[y_i=1]} (1 - f(x_i))^{[y_i=-1]} - λ · total_regularizer`.
///
/// The objective is concave in `g`, so a projected Newton iteration on the
/// box `[g(CLAMP), g(1 - CLAMP)]` reaches the unique maximum.
pub fn fit_anchors(anchors: &AnchorSet, density: &Density, lambda: f64) -> Result<AnchorFit> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    let locs = anchors.locations().to_vec();
    for &x in &locs {
        if !(density.pdf_1d(x)? > 0.0) {
            return Err(Error::invalid(format!("density vanishes at anchor {x}")));
        }
    }
    // Interval structure does not depend on the values; build it once.
    let skeleton = Conditional1D::new(density.clone(), locs.clone(), vec![0.5; locs.len()])?;
    let problem = AnchorProblem {
        anchors,
        coupling: skeleton
            .interval_recints()
            .iter()
            .map(|r| r.map_or(0.0, |r| lambda / r))
            .collect(),
        lower: g_transform(CLAMP),
        upper: g_transform(1.0 - CLAMP),
    };

    let project = |v: f64| v.clamp(problem.lower, problem.upper);
    let mut g: Vec<f64> = (0..anchors.len())
        .map(|k| {
            let (p, n) = anchors.counts(k);
            project(g_transform((p as f64 + 0.5) / ((p + n) as f64 + 1.0)))
        })
        .collect();
    let mut value = problem.value(&g);
    let mut grad = problem.gradient(&g);
    let mut iterations = 0;

    for it in 1..=500 {
        if problem.projected_norm(&g, &grad) <= ANCHOR_GRAD_TOL {
            break;
        }
        let free: Vec<usize> = (0..g.len()).filter(|&k| problem.free(g[k], grad[k])).collect();
        let h = problem.hessian(&g);
        let hf = DMatrix::from_fn(free.len(), free.len(), |i, j| -h[(free[i], free[j])]);
        let rhs = DVector::from_iterator(free.len(), free.iter().map(|&k| grad[k]));
        let step = hf
            .cholesky()
            .map(|c| c.solve(&rhs))
            .ok_or_else(|| Error::Numerical("anchor Hessian lost definiteness".into()))?;
        let mut direction = vec![0.0; g.len()];
        for (i, &k) in free.iter().enumerate() {
            direction[k] = step[i];
        }

        let mut alpha = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let cand: Vec<f64> = g.iter().zip(&direction).map(|(a, d)| project(a + alpha * d)).collect();
            let v = problem.value(&cand);
            if v > value || (v == value && cand != g) {
                g = cand;
                value = v;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        iterations = it;
        grad = problem.gradient(&g);
        if !moved {
            // No representable improvement left.
            break;
        }
    }

    let values: Vec<f64> = g.iter().map(|&v| g_inverse(v)).collect();
    let conditional = Conditional1D {
        values: values.iter().map(|v| v.clamp(CLAMP, 1.0 - CLAMP)).collect(),
        g: g.clone(),
        ..skeleton
    };
    let regularizer = conditional.total_regularizer();
    Ok(AnchorFit {
        objective: value,
        regularizer,
        grad_norm: problem.projected_norm(&g, &grad),
        iterations,
        conditional,
    })
}
