//! Numeric checks of the regularizer inequalities, the small-region
//! mutual-information expansion, and isotropy of the regional covariance.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditionals::{LogisticQuadratic, Pchip, SmoothConditional, TestConditional};
use crate::dataset::{Label, LabeledDataset};
use crate::density::Density;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_box, integrate_with_breaks, QuadConfig};

/// Quadrature slack allowed on inequality margins.
pub const MARGIN_TOL: f64 = 1e-9;
/// Minimal fitted order for the mutual-information expansion.
pub const MI_MIN_ORDER: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Report {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Report {
    /// `|E[L_h1] - E[L_h2]|`.
    pub expected_lhs: f64,
    /// `2 E[(h1 - h2)²]^½`.
    pub expected_rhs: f64,
    pub empirical_lhs: f64,
    pub empirical_rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiRow {
    pub diameter: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiReport {
    pub rows: Vec<MiRow>,
    /// Log-log slope of the error over the last three diameters; `None`
    /// when the errors are at roundoff level.
    pub fitted_order: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotropyReport {
    pub values: Vec<f64>,
    pub spread: f64,
}

/// A small region `Q` around `center` carrying a test conditional and the
/// marginal density (renormalized to `Q` by the check).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionSpec {
    pub center: Vec<f64>,
    pub half_width: f64,
    pub conditional: TestConditional,
    pub density: Density,
}

fn quad() -> QuadConfig {
    QuadConfig::tight()
}

fn merged_breaks(density: &Density, h: &[&dyn SmoothConditional]) -> Vec<f64> {
    let mut b = density.breakpoints();
    for c in h {
        b.extend(c.breakpoints());
    }
    b
}

fn require_1d(what: &'static str, density: &Density, conds: &[&dyn SmoothConditional]) -> Result<()> {
    if density.dim() != 1 || conds.iter().any(|c| c.dim() != 1) {
        return Err(Error::Unsupported {
            op: what,
            kind: "multidimensional",
        });
    }
    Ok(())
}

/// Compares `∫ p h'²/(h(1-h))` over `[x1, x2]` with `4 (h(x2) - h(x1))² / ∫ dx/p`.
pub fn lemma3_check(h: &dyn SmoothConditional, density: &Density, x1: f64, x2: f64) -> Result<Lemma3Report> {
    require_1d("lemma3_check", density, &[h])?;
    let (a, b) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    if !(a < b) {
        return Err(Error::invalid("the interval check needs two distinct points"));
    }
    let cfg = quad();
    let recint = density.reciprocal_integral_with(a, b, &cfg)?;
    let integrand = |x: f64| {
        let d = h.gradient(&[x])[0];
        if d == 0.0 {
            return 0.0;
        }
        let v = h.value(&[x]);
        density.pdf_1d(x).unwrap_or(f64::NAN) * d * d / (v * (1.0 - v))
    };
    let lhs = integrate_with_breaks(integrand, a, b, &merged_breaks(density, &[h]), &cfg)?.value;
    let dh = h.value(&[b]) - h.value(&[a]);
    let rhs = 4.0 * dh * dh / recint;
    let margin = lhs - rhs;
    Ok(Lemma3Report {
        lhs,
        rhs,
        margin,
        pass: margin >= -MARGIN_TOL,
    })
}

/// Square loss `(h(y|x) - 1)²` with `h(-1|x) = 1 - h(1|x)`.
fn square_loss(h: f64, y: Label) -> f64 {
    match y {
        Label::Pos => (h - 1.0).powi(2),
        Label::Neg => h * h,
    }
}

/// Checks `|E[L_h1] - E[L_h2]| ≤ 2 E[(h1 - h2)²]^½`, both under `p(x)` with
/// labels from `truth`, and on the empirical distribution of `sample`.
pub fn lemma4_check(
    h1: &dyn SmoothConditional,
    h2: &dyn SmoothConditional,
    truth: &dyn SmoothConditional,
    density: &Density,
    sample: &LabeledDataset,
) -> Result<Lemma4Report> {
    require_1d("lemma4_check", density, &[h1, h2, truth])?;
    if sample.is_empty() {
        return Err(Error::EmptyDataset("square-loss check needs a sample"));
    }
    if sample.dim() != Some(1) {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: sample.dim().unwrap_or(0),
        });
    }
    let cfg = quad();
    let (lo, hi) = density.effective_support()?;
    let breaks = merged_breaks(density, &[h1, h2, truth]);
    let p = |x: f64| density.pdf_1d(x).unwrap_or(f64::NAN);
    let loss_gap = |x: f64| {
        let (a, b, t) = (h1.value(&[x]), h2.value(&[x]), truth.value(&[x]));
        p(x) * (t * (square_loss(a, Label::Pos) - square_loss(b, Label::Pos))
            + (1.0 - t) * (square_loss(a, Label::Neg) - square_loss(b, Label::Neg)))
    };
    let sq = |x: f64| p(x) * (h1.value(&[x]) - h2.value(&[x])).powi(2);
    let expected_lhs = integrate_with_breaks(loss_gap, lo, hi, &breaks, &cfg)?.value.abs();
    let expected_rhs = 2.0 * integrate_with_breaks(sq, lo, hi, &breaks, &cfg)?.value.max(0.0).sqrt();

    let m = sample.len() as f64;
    let (mut gap, mut sq_sum) = (0.0, 0.0);
    for (x, y) in sample.iter() {
        let (a, b) = (h1.value(x), h2.value(x));
        gap += square_loss(a, y) - square_loss(b, y);
        sq_sum += (a - b).powi(2);
    }
    let empirical_lhs = (gap / m).abs();
    let empirical_rhs = 2.0 * (sq_sum / m).sqrt();
    let slack = (expected_rhs - expected_lhs).min(empirical_rhs - empirical_lhs);
    Ok(Lemma4Report {
        expected_lhs,
        expected_rhs,
        empirical_lhs,
        empirical_rhs,
        slack,
        pass: slack >= -MARGIN_TOL,
    })
}

/// Exact regional mutual information and its `½ Tr[cov_Q F(x₀)]` expansion.
fn mi_at(region: &RegionSpec, diameter: f64) -> Result<MiRow> {
    let d = region.center.len();
    let c = &region.center;
    let lower: Vec<f64> = c.iter().map(|v| v - 0.5 * diameter).collect();
    let upper: Vec<f64> = c.iter().map(|v| v + 0.5 * diameter).collect();
    let cfg = quad();
    let dens = &region.density;
    let h = &region.conditional;
    let p = |x: &[f64]| dens.pdf(x).unwrap_or(f64::NAN);

    let z = integrate_box(p, &lower, &upper, &cfg)?;
    if !(z > 0.0) {
        return Err(Error::Numerical("density carries no mass on the region".into()));
    }
    let py = integrate_box(|x| p(x) * h.value(x), &lower, &upper, &cfg)? / z;
    let kl = |x: &[f64]| {
        let f = h.value(x);
        p(x) * (f * (f / py).ln() + (1.0 - f) * ((1.0 - f) / (1.0 - py)).ln())
    };
    let exact = integrate_box(kl, &lower, &upper, &cfg)? / z;

    // Moments relative to the box center.
    let mean: Vec<f64> = (0..d)
        .map(|i| Ok(integrate_box(|x| p(x) * (x[i] - c[i]), &lower, &upper, &cfg)? / z))
        .collect::<Result<_>>()?;
    let mut cov = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let m = integrate_box(|x| p(x) * (x[i] - c[i]) * (x[j] - c[j]), &lower, &upper, &cfg)? / z;
            cov[(i, j)] = m - mean[i] * mean[j];
            cov[(j, i)] = cov[(i, j)];
        }
    }
    let f0 = h.value(c);
    let grad = nalgebra::DVector::from_vec(h.gradient(c));
    let asymptotic = 0.5 * (grad.transpose() * &cov * &grad)[(0, 0)] / (f0 * (1.0 - f0));
    Ok(MiRow {
        diameter,
        exact,
        asymptotic,
        abs_error: (exact - asymptotic).abs(),
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    num / den
}

pub fn mi_region_check(region: &RegionSpec, diameters: &[f64]) -> Result<MiReport> {
    let d = region.center.len();
    if d == 0 || region.density.dim() != d || region.conditional.dim() != d {
        return Err(Error::invalid("region center, density and conditional must share a dimension"));
    }
    if !(region.half_width > 0.0) {
        return Err(Error::invalid("half_width must be positive"));
    }
    if diameters.is_empty()
        || diameters.windows(2).any(|w| !(w[0] > w[1]))
        || diameters.iter().any(|&v| !(v > 0.0) || v > 2.0 * region.half_width * (1.0 + 1e-12))
    {
        return Err(Error::invalid("diameters must decrease and fit inside the region"));
    }
    // Conditional must stay inside (0, 1) on Q; probe a coarse lattice.
    let probes = 9usize;
    for idx in 0..probes.pow(d as u32) {
        let x: Vec<f64> = (0..d)
            .map(|i| {
                let k = (idx / probes.pow(i as u32)) % probes;
                region.center[i] - region.half_width + 2.0 * region.half_width * k as f64 / (probes - 1) as f64
            })
            .collect();
        let v = region.conditional.value(&x);
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::invalid(format!("conditional leaves (0, 1) at {x:?}: {v}")));
        }
    }
    let rows: Vec<MiRow> = diameters.iter().map(|&dm| mi_at(region, dm)).collect::<Result<_>>()?;
    let tail = &rows[rows.len().saturating_sub(3)..];
    let roundoff = tail.iter().all(|r| r.abs_error <= 1e-15 * (1.0 + r.exact.abs()));
    let fitted_order = if tail.len() >= 2 && tail.iter().all(|r| r.abs_error > 0.0) && !roundoff {
        let xs: Vec<f64> = tail.iter().map(|r| r.diameter).collect();
        let ys: Vec<f64> = tail.iter().map(|r| r.abs_error).collect();
        Some(log_log_slope(&xs, &ys))
    } else {
        None
    };
    let pass = match fitted_order {
        Some(o) => o >= MI_MIN_ORDER,
        None => roundoff,
    };
    Ok(MiReport {
        rows,
        fitted_order,
        pass,
    })
}

/// `vᵀ cov0 v` along each unit direction and their spread.
pub fn isotropy_check(cov0: &DMatrix<f64>, directions: &[Vec<f64>]) -> Result<IsotropyReport> {
    let d = cov0.nrows();
    if d == 0 || cov0.ncols() != d {
        return Err(Error::invalid("covariance must be a non-empty square matrix"));
    }
    let scale = cov0.amax().max(f64::MIN_POSITIVE);
    if (cov0 - cov0.transpose()).amax() > 1e-12 * scale {
        return Err(Error::invalid("covariance must be symmetric"));
    }
    if cov0.clone().cholesky().is_none() {
        return Err(Error::invalid("covariance must be positive definite"));
    }
    if directions.is_empty() {
        return Err(Error::invalid("need at least one direction"));
    }
    let mut values = Vec::with_capacity(directions.len());
    for v in directions {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(v);
        if (v.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("direction has norm {}, expected 1", v.norm())));
        }
        values.push((v.transpose() * cov0 * &v)[(0, 0)]);
    }
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(IsotropyReport {
        values,
        spread: max - min,
    })
}

/// Summary of a randomized sweep. `values` holds the per-instance margin,
/// slack or fitted order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub check: String,
    pub seed: u64,
    pub instances: usize,
    pub violations: usize,
    pub worst: f64,
    pub values: Vec<f64>,
    pub pass: bool,
}

fn instance_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// One of five density families, with a range where it is comfortably positive.
pub fn random_density(rng: &mut impl Rng, family: usize) -> (Density, f64, f64) {
    let loc: f64 = rng.random_range(-1.0..1.0);
    let scale: f64 = rng.random_range(0.5..2.0);
    match family % 5 {
        0 => (Density::uniform(loc - scale, loc + scale).unwrap(), loc - scale, loc + scale),
        1 => (Density::gaussian_1d(loc, scale * scale).unwrap(), loc - 2.0 * scale, loc + 2.0 * scale),
        2 => (Density::laplace(loc, scale).unwrap(), loc - 3.0 * scale, loc + 3.0 * scale),
        3 => {
            let sep: f64 = rng.random_range(1.0..4.0);
            let w: f64 = rng.random_range(0.2..0.8);
            let d = Density::mixture(vec![
                (w, Density::gaussian_1d(loc - sep / 2.0, 0.5).unwrap()),
                (1.0 - w, Density::gaussian_1d(loc + sep / 2.0, 0.5).unwrap()),
            ])
            .unwrap();
            (d, loc - sep / 2.0 - 1.0, loc + sep / 2.0 + 1.0)
        }
        _ => {
            let centers: Vec<Vec<f64>> = (0..6).map(|_| vec![loc + rng.random_range(-1.5..1.5)]).collect();
            let lo = centers.iter().map(|c| c[0]).fold(f64::INFINITY, f64::min);
            let hi = centers.iter().map(|c| c[0]).fold(f64::NEG_INFINITY, f64::max);
            (Density::kde(centers, 0.3).unwrap(), lo - 0.5, hi + 0.5)
        }
    }
}

/// PCHIP conditional with 4 to 7 knots spanning `[lo, hi]`, values in `[0.05, 0.95]`.
pub fn random_pchip(rng: &mut impl Rng, lo: f64, hi: f64) -> Pchip {
    let n = rng.random_range(4..=7);
    let mut knots: Vec<f64> = (0..n - 2).map(|_| rng.random_range(lo..hi)).collect();
    knots.push(lo);
    knots.push(hi);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let values = knots.iter().map(|_| rng.random_range(0.05..0.95)).collect();
    Pchip::new(knots, values).expect("valid random pchip")
}

fn summarize(check: &str, seed: u64, values: Vec<f64>, ok: impl Fn(f64) -> bool, lower_is_worse: bool) -> SweepReport {
    let violations = values.iter().filter(|v| !ok(**v)).count();
    let worst = if lower_is_worse {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    };
    SweepReport {
        check: check.into(),
        seed,
        instances: values.len(),
        violations,
        worst,
        pass: violations == 0,
        values,
    }
}

/// Fisher-information lower bound `4Δh² / ∫1/p` on random spline conditionals across the five density families.
pub fn lemma3_sweep(instances: usize, seed: u64) -> Result<SweepReport> {
    let margins = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let (density, lo, hi) = random_density(&mut rng, i);
            let a = rng.random_range(lo..hi);
            let b = rng.random_range(lo..hi);
            let (x1, x2) = (a.min(b), a.max(b).max(a.min(b) + 1e-3));
            let h = random_pchip(&mut rng, x1, x2);
            Ok(lemma3_check(&h, &density, x1, x2)?.margin)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize("lemma3", seed, margins, |m| m >= -MARGIN_TOL, true))
}

/// Square-loss gap bound on random conditional pairs with 50-point samples.
pub fn lemma4_sweep(instances: usize, seed: u64) -> Result<SweepReport> {
    let slacks = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let (density, lo, hi) = random_density(&mut rng, i);
            let h1 = random_pchip(&mut rng, lo, hi);
            let h2 = random_pchip(&mut rng, lo, hi);
            let truth = random_pchip(&mut rng, lo, hi);
            let mut sample = LabeledDataset::default();
            for x in density.sample(50, rng.random())? {
                let y = if rng.random::<f64>() < truth.eval(x[0]) {
                    Label::Pos
                } else {
                    Label::Neg
                };
                sample.push(x, y);
            }
            Ok(lemma4_check(&h1, &h2, &truth, &density, &sample)?.slack)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize("lemma4", seed, slacks, |s| s >= -MARGIN_TOL, true))
}

/// Random region: 1D uniform, 1D Gaussian, or 2D Gaussian marginal with a
/// logistic-quadratic conditional.
pub fn random_region(rng: &mut impl Rng, kind: usize) -> RegionSpec {
    let d = if kind % 3 == 2 { 2 } else { 1 };
    let center: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let density = match kind % 3 {
        0 => Density::uniform(center[0] - 1.0, center[0] + 1.0).unwrap(),
        _ => {
            let mean = center.iter().map(|c| c + rng.random_range(-1.0..1.0)).collect();
            Density::gaussian(mean, rng.random_range(0.25..2.0)).unwrap()
        }
    };
    let linear: Vec<f64> = (0..d)
        .map(|_| {
            let s: f64 = rng.random_range(0.5..2.0);
            if rng.random::<bool>() {
                s
            } else {
                -s
            }
        })
        .collect();
    let curvature = (0..d).map(|_| rng.random_range(-2.0..2.0)).collect();
    let shift = center.iter().map(|c| c + rng.random_range(-0.3..0.3)).collect();
    let conditional = LogisticQuadratic::new(rng.random_range(-1.0..1.0), linear, curvature, shift).unwrap();
    RegionSpec {
        center,
        half_width: 0.2,
        conditional: TestConditional::LogisticQuadratic(conditional),
        density,
    }
}

pub const MI_DIAMETERS: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

/// Fitted convergence order of the expansion on random regions.
pub fn mi_sweep(instances: usize, seed: u64) -> Result<SweepReport> {
    let orders = (0..instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            let region = random_region(&mut rng, i);
            let report = mi_region_check(&region, &MI_DIAMETERS)?;
            Ok(report.fitted_order.unwrap_or(f64::INFINITY))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(summarize("mi", seed, orders, |o| o >= MI_MIN_ORDER, true))
}

/// Uniformly random unit vector.
pub fn random_unit(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect();
        let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|a| a / n).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonparam1d::Conditional1D;

    #[test]
    fn lemma3_examples() {
        let u = Density::uniform(0.0, 1.0).unwrap();
        let c = TestConditional::constant(0.4);
        let r = lemma3_check(&c, &u, 0.1, 0.9).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));

        let opt = Conditional1D::new(u.clone(), vec![0.0, 1.0], vec![0.25, 0.75]).unwrap();
        let r = lemma3_check(&opt, &u, 0.0, 1.0).unwrap();
        assert!((r.lhs - (std::f64::consts::PI / 3.0).powi(2)).abs() < 1e-6, "{r:?}");
        assert!((r.rhs - 1.0).abs() < 1e-9);
        assert!((r.margin - 0.09662).abs() < 1e-5);
        assert!(r.pass);
    }

    #[test]
    fn lemma4_examples() {
        let g = Density::gaussian_1d(0.0, 1.0).unwrap();
        let truth = TestConditional::constant(0.3);
        let sample = LabeledDataset::new(vec![vec![0.1], vec![-0.4]], vec![Label::Pos, Label::Neg]).unwrap();
        let h = TestConditional::constant(0.7);
        let r = lemma4_check(&h, &h, &truth, &g, &sample).unwrap();
        assert_eq!((r.expected_lhs, r.empirical_lhs, r.empirical_rhs), (0.0, 0.0, 0.0));
        assert!(r.expected_rhs < 1e-12);

        let one = TestConditional::constant(1.0);
        let zero = TestConditional::constant(0.0);
        let r = lemma4_check(&one, &zero, &truth, &g, &sample).unwrap();
        assert!((r.expected_rhs - 2.0).abs() < 1e-6);
        assert_eq!(r.empirical_rhs, 2.0);
        assert!(r.expected_lhs <= 2.0 && r.pass);
    }

    #[test]
    fn mi_uniform_example() {
        let region = RegionSpec {
            center: vec![0.0],
            half_width: 0.1,
            conditional: TestConditional::Affine {
                offset: 0.5,
                slope: vec![1.0],
            },
            density: Density::uniform(-1.0, 1.0).unwrap(),
        };
        let r = mi_region_check(&region, &[0.2, 0.1]).unwrap();
        assert!((r.rows[0].asymptotic - 0.0066667).abs() < 1e-7);
        assert!((r.rows[0].asymptotic / r.rows[1].asymptotic - 4.0).abs() < 1e-9);
        assert!(r.rows[0].abs_error < 1e-2 * r.rows[0].exact);
        assert!(r.rows[1].abs_error < r.rows[0].abs_error / 8.0);
    }

    #[test]
    fn mi_constant_is_zero() {
        let region = RegionSpec {
            center: vec![0.3],
            half_width: 0.2,
            conditional: TestConditional::constant(0.3),
            density: Density::gaussian_1d(0.0, 1.0).unwrap(),
        };
        let r = mi_region_check(&region, &MI_DIAMETERS).unwrap();
        for row in &r.rows {
            assert!(row.exact.abs() < 1e-15 && row.asymptotic == 0.0, "{row:?}");
        }
        assert!(r.pass);
    }

    #[test]
    fn isotropy_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let dirs: Vec<Vec<f64>> = (0..100).map(|_| random_unit(&mut rng, 3)).collect();
        assert!(isotropy_check(&id, &dirs).unwrap().spread <= 1e-12);
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]));
        let r = isotropy_check(&diag, &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(r.values, vec![1.0, 2.0]);
        assert_eq!(r.spread, 1.0);
        assert!(isotropy_check(&diag, &[vec![1.0, 1.0]]).is_err());
    }
}
