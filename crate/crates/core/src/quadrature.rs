//! Adaptive Gauss–Kronrod quadrature on bounded intervals.
//!
//! The integrator keeps a priority queue of subintervals ordered by their
//! local error estimate and bisects the worst one until the global estimate
//! satisfies `max(abs_tol, rel_tol * |I|)`. Each panel uses the 7-point
//! Gauss / 15-point Kronrod pair; the error of a panel is `|K15 - G7|`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_intervals: 4000,
        }
    }
}

impl QuadConfig {
    pub fn tight() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_intervals: 20_000,
        }
    }

    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// One 15-point Kronrod panel on `[a, b]`. Returns `(kronrod, |kronrod - gauss|)`.
///
/// Fails with `None` when the integrand is non-finite at a node.
pub fn gauss_kronrod_15<F>(f: &mut F, a: f64, b: f64) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    if !fc.is_finite() {
        return None;
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() || !f2.is_finite() {
            return None;
        }
        kronrod += w * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Some((kronrod * half, ((kronrod - gauss) * half).abs()))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptively integrates `f` over `[a, b]`. `a > b` flips the sign; `a == b` is zero.
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("non-finite bounds [{a}, {b}]")));
    }
    if a > b {
        let r = integrate(f, b, a, cfg)?;
        return Ok(Integral {
            value: -r.value,
            ..r
        });
    }

    let non_finite = |a: f64, b: f64| Error::QuadratureFailed {
        a,
        b,
        estimate: f64::NAN,
        error: f64::INFINITY,
    };

    let (v0, e0) = gauss_kronrod_15(&mut f, a, b).ok_or_else(|| non_finite(a, b))?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v0,
        error: e0,
    });
    let mut total = v0;
    let mut total_err = e0;

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::QuadratureFailed {
                a,
                b,
                estimate: total,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval at floating-point resolution; accept its contribution.
            heap.push(Panel { error: 0.0, ..worst });
            total_err -= worst.error;
            continue;
        }
        let (lv, le) =
            gauss_kronrod_15(&mut f, worst.a, mid).ok_or_else(|| non_finite(worst.a, mid))?;
        let (rv, re) =
            gauss_kronrod_15(&mut f, mid, worst.b).ok_or_else(|| non_finite(mid, worst.b))?;
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }

    // Resum to shed the drift accumulated by incremental updates.
    let intervals = heap.len();
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().map(|p| p.value).sum();
    let error = panels.iter().map(|p| p.error).sum();
    Ok(Integral {
        value,
        error,
        intervals,
    })
}

/// Integrates over `[a, b]` split at every breakpoint strictly inside it.
///
/// Use this for integrands with known kinks or jumps (uniform edges, the
/// Laplace cusp) so that no panel straddles a discontinuity.
pub fn integrate_with_breaks<F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut value = 0.0;
    let mut error = 0.0;
    let mut intervals = 0;
    let mut left = lo;
    for right in cuts.into_iter().chain(std::iter::once(hi)) {
        // Each piece gets the full relative tolerance against its own size.
        let piece = integrate(&mut f, left, right, cfg)?;
        value += piece.value;
        error += piece.error;
        intervals += piece.intervals;
        left = right;
    }
    Ok(Integral {
        value: sign * value,
        error,
        intervals,
    })
}

/// Nested adaptive quadrature over an axis-aligned box.
///
/// Cost grows as the product of the per-axis panel counts, so this is meant
/// for `d <= 3` and smooth integrands.
pub fn integrate_box<F>(f: F, lower: &[f64], upper: &[f64], cfg: &QuadConfig) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if lower.len() != upper.len() {
        return Err(Error::DimensionMismatch {
            expected: lower.len(),
            got: upper.len(),
        });
    }
    if lower.is_empty() {
        return Err(Error::invalid("zero-dimensional box"));
    }
    let mut point = lower.to_vec();
    nested(&f, lower, upper, cfg, 0, &mut point)
}

fn nested<F>(
    f: &F,
    lower: &[f64],
    upper: &[f64],
    cfg: &QuadConfig,
    axis: usize,
    point: &mut [f64],
) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let last = axis + 1 == lower.len();
    let mut failure = None;
    let result = integrate(
        |x| {
            point[axis] = x;
            if last {
                f(point)
            } else {
                let mut inner = point.to_vec();
                match nested(f, lower, upper, cfg, axis + 1, &mut inner) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                }
            }
        },
        lower[axis],
        upper[axis],
        cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(result?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let (v, _) = gauss_kronrod_15(&mut |x: f64| x.powi(10), -1.0, 2.0).unwrap();
        assert_relative_eq!(v, (2f64.powi(11) + 1.0) / 11.0, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_integral() {
        let r = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, &QuadConfig::default()).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let cfg = QuadConfig::default();
        let fwd = integrate(f64::cos, 0.0, 1.0, &cfg).unwrap().value;
        let rev = integrate(f64::cos, 1.0, 0.0, &cfg).unwrap().value;
        assert_eq!(fwd, -rev);
        assert_relative_eq!(fwd, 1f64.sin(), max_relative = 1e-12);
    }

    #[test]
    fn breaks_handle_jumps() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 3.0 };
        let r = integrate_with_breaks(step, 0.0, 1.0, &[0.3, 5.0], &QuadConfig::default()).unwrap();
        assert_relative_eq!(r.value, 0.3 + 2.1, max_relative = 1e-13);
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, &QuadConfig::default());
        assert!(matches!(r, Err(Error::QuadratureFailed { .. })));
    }

    #[test]
    fn box_integral_of_separable_function() {
        let v = integrate_box(
            |x| x[0] * x[1].powi(2),
            &[0.0, 0.0],
            &[1.0, 2.0],
            &QuadConfig::default(),
        )
        .unwrap();
        assert_relative_eq!(v, 0.5 * 8.0 / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn sqrt_singularity_converges() {
        let r = integrate(f64::sqrt, 0.0, 1.0, &QuadConfig::default()).unwrap();
        assert_relative_eq!(r.value, 2.0 / 3.0, max_relative = 1e-8);
    }
}
