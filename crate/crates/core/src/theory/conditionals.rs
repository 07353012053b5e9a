//! Smooth test conditionals `h(1|x)` used by the inequality checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logistic::{sigma_product, sigmoid};
use crate::nonparam1d::Conditional1D;

pub trait SmoothConditional: Send + Sync {
    fn dim(&self) -> usize;
    /// `h(1|x)`; NaN if the point cannot be evaluated.
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// 1D locations where the second derivative may jump.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// `σ(a + bᵀ(x - c) + ½ Σ k_i (x_i - c_i)²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticQuadratic {
    pub offset: f64,
    pub linear: Vec<f64>,
    pub curvature: Vec<f64>,
    pub center: Vec<f64>,
}

impl LogisticQuadratic {
    pub fn new(offset: f64, linear: Vec<f64>, curvature: Vec<f64>, center: Vec<f64>) -> Result<Self> {
        let d = linear.len();
        if d == 0 || curvature.len() != d || center.len() != d {
            return Err(Error::invalid("linear, curvature and center must share a positive length"));
        }
        Ok(Self {
            offset,
            linear,
            curvature,
            center,
        })
    }

    fn logit(&self, x: &[f64]) -> f64 {
        let terms = x.iter().zip(&self.center).zip(self.linear.iter().zip(&self.curvature));
        self.offset
            + terms
                .map(|((xi, c), (l, k))| {
                    let y = xi - c;
                    l * y + 0.5 * k * y * y
                })
                .sum::<f64>()
    }
}

impl SmoothConditional for LogisticQuadratic {
    fn dim(&self) -> usize {
        self.linear.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let w = sigma_product(self.logit(x));
        (0..self.linear.len())
            .map(|i| w * (self.linear[i] + self.curvature[i] * (x[i] - self.center[i])))
            .collect()
    }
}

/// Monotone piecewise-cubic Hermite interpolant through `(knots, values)`,
/// held constant outside the knots. It never leaves the range of `values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PchipSpec", into = "PchipSpec")]
pub struct Pchip {
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PchipSpec {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<PchipSpec> for Pchip {
    type Error = Error;
    fn try_from(s: PchipSpec) -> Result<Self> {
        Pchip::new(s.knots, s.values)
    }
}

impl From<Pchip> for PchipSpec {
    fn from(p: Pchip) -> Self {
        PchipSpec {
            knots: p.knots,
            values: p.values,
        }
    }
}

impl Pchip {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::invalid("pchip needs at least two knots and one value per knot"));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("pchip knots must be strictly increasing"));
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid("pchip values must lie in [0, 1]"));
        }
        let slopes = pchip_slopes(&knots, &values);
        Ok(Self {
            knots,
            values,
            slopes,
        })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    fn locate(&self, x: f64) -> Option<(usize, f64, f64)> {
        let n = self.knots.len();
        if x <= self.knots[0] || x >= self.knots[n - 1] {
            return None;
        }
        let k = self.knots.partition_point(|&t| t <= x) - 1;
        let h = self.knots[k + 1] - self.knots[k];
        Some((k, h, (x - self.knots[k]) / h))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let Some((k, h, t)) = self.locate(x) else {
            return if x <= self.knots[0] {
                self.values[0]
            } else {
                *self.values.last().expect("knots")
            };
        };
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let Some((k, h, t)) = self.locate(x) else {
            return 0.0;
        };
        let t2 = t * t;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        d00 * self.values[k] + d10 * self.slopes[k] + d01 * self.values[k + 1] + d11 * self.slopes[k + 1]
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| {
        let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s.signum() != d0.signum() || d0 == 0.0 {
            0.0
        } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
            3.0 * d0
        } else {
            s
        }
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

impl SmoothConditional for Pchip {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.eval(x[0])
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        vec![self.derivative(x[0])]
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.knots.clone()
    }
}

/// The minimal-regularizer conditional, with `f' = -½ sin(g) · Δg / (R p(x))`.
impl SmoothConditional for Conditional1D {
    fn dim(&self) -> usize {
        1
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.evaluate(x[0]).unwrap_or(f64::NAN)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let x = x[0];
        let locs = self.locations();
        let n = locs.len();
        if x <= locs[0] || x >= locs[n - 1] {
            return vec![0.0];
        }
        let k = locs.partition_point(|&l| l <= x) - 1;
        let Some(r) = self.interval_recints()[k] else {
            return vec![0.0];
        };
        let vals = self.values();
        let dg = crate::nonparam1d::g_transform(vals[k + 1]) - crate::nonparam1d::g_transform(vals[k]);
        let f = self.value(&[x]);
        let g = crate::nonparam1d::g_transform(f);
        let p = self.density().pdf_1d(x).unwrap_or(f64::NAN);
        vec![-0.5 * g.sin() * dg / (r * p)]
    }

    fn breakpoints(&self) -> Vec<f64> {
        let mut b = self.locations().to_vec();
        b.extend(self.density().breakpoints());
        b
    }
}

/// Serializable test conditional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestConditional {
    Constant {
        value: f64,
        #[serde(default = "one")]
        dim: usize,
    },
    /// `offset + slopeᵀx`; callers keep it inside (0, 1) on their region.
    Affine {
        offset: f64,
        slope: Vec<f64>,
    },
    LogisticQuadratic(LogisticQuadratic),
    Pchip(Pchip),
}

fn one() -> usize {
    1
}

impl TestConditional {
    pub fn constant(value: f64) -> Self {
        TestConditional::Constant { value, dim: 1 }
    }
}

impl SmoothConditional for TestConditional {
    fn dim(&self) -> usize {
        match self {
            TestConditional::Constant { dim, .. } => *dim,
            TestConditional::Affine { slope, .. } => slope.len(),
            TestConditional::LogisticQuadratic(c) => c.dim(),
            TestConditional::Pchip(c) => c.dim(),
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self {
            TestConditional::Constant { value, .. } => *value,
            TestConditional::Affine { offset, slope } => offset + slope.iter().zip(x).map(|(a, b)| a * b).sum::<f64>(),
            TestConditional::LogisticQuadratic(c) => c.value(x),
            TestConditional::Pchip(c) => c.value(x),
        }
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            TestConditional::Constant { dim, .. } => vec![0.0; *dim],
            TestConditional::Affine { slope, .. } => slope.clone(),
            TestConditional::LogisticQuadratic(c) => c.gradient(x),
            TestConditional::Pchip(c) => c.gradient(x),
        }
    }

    fn breakpoints(&self) -> Vec<f64> {
        match self {
            TestConditional::Pchip(c) => c.breakpoints(),
            _ => Vec::new(),
        }
    }
}
