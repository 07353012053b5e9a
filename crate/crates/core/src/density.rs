//! Marginal densities `p(x)`: analytic families, empirical samples and
//! isotropic Gaussian kernel estimates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadConfig};

/// Half-width of the effective support of a Gaussian, in standard deviations.
pub const GAUSSIAN_SUPPORT_SIGMAS: f64 = 12.0;
/// Half-width of the effective support of a Laplace density, in scale units.
/// `exp(-70)` keeps the truncated tail mass below 1e-30.
pub const LAPLACE_SUPPORT_SCALES: f64 = 70.0;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub density: Density,
}

/// A marginal density over `R^d`.
///
/// JSON form is tagged by `"kind"`; see the crate README for the field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Density {
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Isotropic Gaussian `N(mean, variance * I)`.
    Gaussian {
        #[serde(deserialize_with = "de::point")]
        mean: Vec<f64>,
        variance: f64,
    },
    Laplace {
        location: f64,
        scale: f64,
    },
    Mixture {
        components: Vec<MixtureComponent>,
    },
    Empirical {
        #[serde(deserialize_with = "de::points")]
        points: Vec<Vec<f64>>,
    },
    /// `(1/m) sum_j N(x; c_j, tau * I)`. Centers are kept in lexicographic order.
    #[serde(rename = "kde")]
    GaussianKde {
        #[serde(deserialize_with = "de::points")]
        centers: Vec<Vec<f64>>,
        tau: f64,
    },
}

impl Density {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Density::Uniform { lo, hi }.validated()
    }

    pub fn gaussian(mean: Vec<f64>, variance: f64) -> Result<Self> {
        Density::Gaussian { mean, variance }.validated()
    }

    pub fn gaussian_1d(mean: f64, variance: f64) -> Result<Self> {
        Self::gaussian(vec![mean], variance)
    }

    pub fn laplace(location: f64, scale: f64) -> Result<Self> {
        Density::Laplace { location, scale }.validated()
    }

    pub fn mixture(components: Vec<(f64, Density)>) -> Result<Self> {
        Density::Mixture {
            components: components
                .into_iter()
                .map(|(weight, density)| MixtureComponent { weight, density })
                .collect(),
        }
        .validated()
    }

    pub fn empirical(points: Vec<Vec<f64>>) -> Result<Self> {
        Density::Empirical { points }.validated()
    }

    pub fn kde(centers: Vec<Vec<f64>>, tau: f64) -> Result<Self> {
        Density::GaussianKde { centers, tau }.validated()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: Density = serde_json::from_str(text).map_err(|e| Error::Format {
            path: "<density json>".into(),
            message: e.to_string(),
        })?;
        d.validated()
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Density::Uniform { .. } => "uniform",
            Density::Gaussian { .. } => "gaussian",
            Density::Laplace { .. } => "laplace",
            Density::Mixture { .. } => "mixture",
            Density::Empirical { .. } => "empirical",
            Density::GaussianKde { .. } => "kde",
        }
    }

    /// Checks the invariants and puts KDE centers in canonical order.
    pub fn validated(mut self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    fn validate(&mut self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDensity(m));
        match self {
            Density::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return bad(format!("uniform needs finite lo < hi, got [{lo}, {hi}]"));
                }
            }
            Density::Gaussian { mean, variance } => {
                if mean.is_empty() || mean.iter().any(|m| !m.is_finite()) {
                    return bad("gaussian mean must be a non-empty finite vector".into());
                }
                if !(variance.is_finite() && *variance > 0.0) {
                    return bad(format!("gaussian variance must be positive, got {variance}"));
                }
            }
            Density::Laplace { location, scale } => {
                if !location.is_finite() || !(scale.is_finite() && *scale > 0.0) {
                    return bad(format!("laplace needs finite location and scale > 0, got {scale}"));
                }
            }
            Density::Mixture { components } => {
                if components.is_empty() {
                    return bad("mixture has no components".into());
                }
                let mut total = 0.0;
                for c in components.iter_mut() {
                    if !(c.weight.is_finite() && c.weight >= 0.0) {
                        return bad(format!("mixture weight {} is not a probability", c.weight));
                    }
                    if matches!(c.density, Density::Empirical { .. }) {
                        return bad("mixture components must have a pdf".into());
                    }
                    c.density.validate()?;
                    total += c.weight;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return bad(format!("mixture weights sum to {total}, not 1"));
                }
                let d = components[0].density.dim();
                if components.iter().any(|c| c.density.dim() != d) {
                    return bad("mixture components differ in dimension".into());
                }
            }
            Density::Empirical { points } => {
                check_points(points, "empirical")?;
            }
            Density::GaussianKde { centers, tau } => {
                check_points(centers, "kde")?;
                if !(tau.is_finite() && *tau > 0.0) {
                    return bad(format!("kde bandwidth must be positive, got {tau}"));
                }
                centers.sort_by(|a, b| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x.total_cmp(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            Density::Uniform { .. } | Density::Laplace { .. } => 1,
            Density::Gaussian { mean, .. } => mean.len(),
            Density::Mixture { components } => components.first().map_or(1, |c| c.density.dim()),
            Density::Empirical { points } => points.first().map_or(1, Vec::len),
            Density::GaussianKde { centers, .. } => centers.first().map_or(1, Vec::len),
        }
    }

    pub fn pdf(&self, x: &[f64]) -> Result<f64> {
        if let Density::Empirical { .. } = self {
            return Err(Error::Unsupported {
                op: "pdf",
                kind: "empirical",
            });
        }
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.pdf_unchecked(x))
    }

    /// 1D convenience wrapper around [`Density::pdf`].
    pub fn pdf_1d(&self, x: f64) -> Result<f64> {
        self.pdf(&[x])
    }

    /// Density value without dimension checks. Empirical densities return NaN.
    pub(crate) fn pdf_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            Density::Uniform { lo, hi } => {
                if x[0] >= *lo && x[0] <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
            Density::Gaussian { mean, variance } => gaussian_pdf(x, mean, *variance),
            Density::Laplace { location, scale } => {
                (-(x[0] - location).abs() / scale).exp() / (2.0 * scale)
            }
            Density::Mixture { components } => components
                .iter()
                .map(|c| c.weight * c.density.pdf_unchecked(x))
                .sum(),
            Density::Empirical { .. } => f64::NAN,
            Density::GaussianKde { centers, tau } => {
                let sum: f64 = centers.iter().map(|c| gaussian_pdf(x, c, *tau)).sum();
                sum / centers.len() as f64
            }
        }
    }

    /// Draws `n` points, deterministically in `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        if n == 0 {
            return Err(Error::invalid("sample size must be at least 1"));
        }
        if let Density::Empirical { .. } = self {
            return Err(Error::Unsupported {
                op: "sample",
                kind: "empirical",
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok((0..n).map(|_| self.draw(&mut rng)).collect())
    }

    pub(crate) fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            Density::Uniform { lo, hi } => vec![lo + (hi - lo) * rng.random::<f64>()],
            Density::Gaussian { mean, variance } => {
                let sd = variance.sqrt();
                mean.iter()
                    .map(|m| m + sd * rng.sample::<f64, _>(StandardNormal))
                    .collect()
            }
            Density::Laplace { location, scale } => {
                // Inverse CDF on u in (-1/2, 1/2).
                let u = rng.random::<f64>() - 0.5;
                let tail = (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE);
                vec![location - scale * u.signum() * tail.ln()]
            }
            Density::Mixture { components } => {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                let mut chosen = components.len() - 1;
                for (i, c) in components.iter().enumerate() {
                    acc += c.weight;
                    if u < acc {
                        chosen = i;
                        break;
                    }
                }
                components[chosen].density.draw(rng)
            }
            Density::GaussianKde { centers, tau } => {
                let c = &centers[rng.random_range(0..centers.len())];
                let sd = tau.sqrt();
                c.iter()
                    .map(|m| m + sd * rng.sample::<f64, _>(StandardNormal))
                    .collect()
            }
            Density::Empirical { .. } => unreachable!("rejected by sample()"),
        }
    }

    /// Mean of the density (1D or multivariate, component-wise).
    pub fn mean(&self) -> Vec<f64> {
        match self {
            Density::Uniform { lo, hi } => vec![0.5 * (lo + hi)],
            Density::Gaussian { mean, .. } => mean.clone(),
            Density::Laplace { location, .. } => vec![*location],
            Density::Mixture { components } => {
                let mut m = vec![0.0; self.dim()];
                for c in components {
                    for (acc, v) in m.iter_mut().zip(c.density.mean()) {
                        *acc += c.weight * v;
                    }
                }
                m
            }
            Density::Empirical { points: centers } | Density::GaussianKde { centers, .. } => {
                let mut m = vec![0.0; self.dim()];
                for c in centers {
                    for (acc, v) in m.iter_mut().zip(c) {
                        *acc += v;
                    }
                }
                m.iter_mut().for_each(|v| *v /= centers.len() as f64);
                m
            }
        }
    }

    fn require_1d(&self, op: &'static str) -> Result<()> {
        if let Density::Empirical { .. } = self {
            return Err(Error::Unsupported {
                op,
                kind: "empirical",
            });
        }
        if self.dim() != 1 {
            return Err(Error::Unsupported {
                op,
                kind: "multidimensional",
            });
        }
        Ok(())
    }

    /// Interval outside of which a 1D density carries negligible mass.
    pub fn effective_support(&self) -> Result<(f64, f64)> {
        self.require_1d("effective_support")?;
        Ok(match self {
            Density::Uniform { lo, hi } => (*lo, *hi),
            Density::Gaussian { mean, variance } => {
                let w = GAUSSIAN_SUPPORT_SIGMAS * variance.sqrt();
                (mean[0] - w, mean[0] + w)
            }
            Density::Laplace { location, scale } => {
                let w = LAPLACE_SUPPORT_SCALES * scale;
                (location - w, location + w)
            }
            Density::Mixture { components } => {
                components
                    .iter()
                    .try_fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                        let (a, b) = c.density.effective_support()?;
                        Ok::<_, Error>((lo.min(a), hi.max(b)))
                    })?
            }
            Density::GaussianKde { centers, tau } => {
                let w = GAUSSIAN_SUPPORT_SIGMAS * tau.sqrt();
                let lo = centers.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
                let hi = centers.iter().map(|c| c[0]).fold(f64::NEG_INFINITY, f64::max);
                (lo - w, hi + w)
            }
            Density::Empirical { .. } => unreachable!(),
        })
    }

    /// Points where a 1D pdf jumps or has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breaks(&mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_breaks(&self, out: &mut Vec<f64>) {
        match self {
            Density::Uniform { lo, hi } => out.extend([*lo, *hi]),
            Density::Laplace { location, .. } => out.push(*location),
            Density::Mixture { components } => {
                components.iter().for_each(|c| c.density.collect_breaks(out))
            }
            _ => {}
        }
    }

    /// Integral of the pdf over its effective support.
    pub fn total_mass(&self) -> Result<f64> {
        let (lo, hi) = self.effective_support()?;
        let f = |x: f64| self.pdf_unchecked(&[x]);
        Ok(integrate_with_breaks(f, lo, hi, &self.breakpoints(), &QuadConfig::default())?.value)
    }

    /// `∫_a^b dx / p(x)` for a 1D density.
    ///
    /// Fails with [`Error::Divergent`] when `p` vanishes (or underflows) on `[a, b]`.
    pub fn reciprocal_integral(&self, a: f64, b: f64) -> Result<f64> {
        self.reciprocal_integral_with(a, b, &QuadConfig::default())
    }

    pub fn reciprocal_integral_with(&self, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64> {
        self.require_1d("reciprocal_integral")?;
        if !(a < b) {
            return Err(Error::invalid(format!("need a < b, got [{a}, {b}]")));
        }
        let integrand = |x: f64| 1.0 / self.pdf_unchecked(&[x]);
        for x in [a, b] {
            if !integrand(x).is_finite() {
                return Err(Error::Divergent { a, b });
            }
        }
        match integrate_with_breaks(integrand, a, b, &self.breakpoints(), cfg) {
            Ok(r) if r.value.is_finite() => Ok(r.value),
            _ => Err(Error::Divergent { a, b }),
        }
    }
}

fn check_points(points: &[Vec<f64>], what: &str) -> Result<()> {
    let Some(first) = points.first() else {
        return Err(Error::InvalidDensity(format!("{what} needs at least one point")));
    };
    let d = first.len();
    if d == 0 {
        return Err(Error::InvalidDensity(format!("{what} points are zero-dimensional")));
    }
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::InvalidDensity(format!("{what} points differ in dimension")));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidDensity(format!("{what} points must be finite")));
    }
    Ok(())
}

/// Isotropic normal density `N(x; mean, variance * I)`.
pub fn gaussian_pdf(x: &[f64], mean: &[f64], variance: f64) -> f64 {
    let sq: f64 = x.iter().zip(mean).map(|(a, b)| (a - b) * (a - b)).sum();
    let d = x.len() as f64;
    (-0.5 * sq / variance - 0.5 * d * (LN_2PI + variance.ln())).exp()
}

mod de {
    use serde::{Deserialize, Deserializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum ScalarOrVec {
        Scalar(f64),
        Vec(Vec<f64>),
    }

    impl From<ScalarOrVec> for Vec<f64> {
        fn from(v: ScalarOrVec) -> Self {
            match v {
                ScalarOrVec::Scalar(x) => vec![x],
                ScalarOrVec::Vec(v) => v,
            }
        }
    }

    pub fn point<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(ScalarOrVec::deserialize(d)?.into())
    }

    pub fn points<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<f64>>, D::Error> {
        let raw = Vec::<ScalarOrVec>::deserialize(d)?;
        Ok(raw.into_iter().map(Into::into).collect())
    }
}
