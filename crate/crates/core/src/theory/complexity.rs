//! Density complexity measures and the sample-size calculator.
//!
//! `m_p(α)` is the probability mass where the density is at most `α`;
//! `c_p(α)` counts the maximal intervals where it exceeds `α`.

use serde::{Deserialize, Serialize};

use crate::density::Density;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, QuadConfig};

/// Points in the level-set scan.
pub const LEVEL_GRID: usize = 10_000;
/// Width at which level-crossing bisection stops.
pub const LEVEL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexityProfile {
    pub alphas: Vec<f64>,
    pub m_values: Vec<f64>,
    pub c_values: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoryQuery {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub density: Density,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SampleBound {
    pub bound: u64,
    /// Unrounded bracketed expression.
    pub raw: f64,
    pub m_p_inverse: f64,
    pub c_p: usize,
}

/// Level-set scanner for a 1D density.
struct LevelScan<'a> {
    density: &'a Density,
    grid: Vec<f64>,
    pdf: Vec<f64>,
    max_pdf: f64,
}

impl<'a> LevelScan<'a> {
    fn new(density: &'a Density) -> Result<Self> {
        if density.dim() != 1 {
            return Err(Error::Unsupported {
                op: "level sets",
                kind: "multidimensional",
            });
        }
        let (lo, hi) = density.effective_support()?;
        // Pad so that support edges fall strictly inside the scan.
        let pad = 1e-3 * (hi - lo);
        let (a, b) = (lo - pad, hi + pad);
        let n = LEVEL_GRID;
        let grid: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
        let pdf: Vec<f64> = grid.iter().map(|&x| density.pdf_1d(x)).collect::<Result<_>>()?;
        let mut max_pdf = pdf.iter().copied().fold(0.0, f64::max);
        for x in density.breakpoints() {
            max_pdf = max_pdf.max(density.pdf_1d(x)?);
        }
        Ok(Self {
            density,
            grid,
            pdf,
            max_pdf,
        })
    }

    /// Crossing of `p = α` between a point below and a point above.
    fn refine(&self, mut below: f64, mut above: f64, alpha: f64) -> f64 {
        while (above - below).abs() > LEVEL_TOL {
            let mid = 0.5 * (below + above);
            if self.density.pdf_1d(mid).unwrap_or(0.0) > alpha {
                above = mid;
            } else {
                below = mid;
            }
        }
        0.5 * (below + above)
    }

    /// Maximal intervals of `{p > α}` within the scan range.
    fn superlevel(&self, alpha: f64) -> Vec<(f64, f64)> {
        let n = self.grid.len();
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            if self.pdf[i] <= alpha {
                i += 1;
                continue;
            }
            let start = i;
            while i < n && self.pdf[i] > alpha {
                i += 1;
            }
            let left = if start == 0 {
                self.grid[0]
            } else {
                self.refine(self.grid[start - 1], self.grid[start], alpha)
            };
            let right = if i == n {
                self.grid[n - 1]
            } else {
                self.refine(self.grid[i], self.grid[i - 1], alpha)
            };
            out.push((left, right));
        }
        out
    }

    fn mass(&self, a: f64, b: f64) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        let f = |x: f64| self.density.pdf_1d(x).unwrap_or(f64::NAN);
        Ok(integrate_with_breaks(f, a, b, &self.density.breakpoints(), &QuadConfig::default())?.value)
    }

    fn m_p(&self, alpha: f64) -> Result<f64> {
        if alpha >= self.max_pdf {
            return Ok(1.0);
        }
        let upper = self.superlevel(alpha);
        let mut edge = self.grid[0];
        let mut total = 0.0;
        for &(l, r) in &upper {
            total += self.mass(edge, l)?;
            edge = r;
        }
        total += self.mass(edge, *self.grid.last().expect("grid"))?;
        Ok(total.clamp(0.0, 1.0))
    }

    fn c_p(&self, alpha: f64) -> Result<usize> {
        if alpha >= self.max_pdf {
            return Err(Error::invalid(format!(
                "alpha {alpha} is at or above the density maximum {}",
                self.max_pdf
            )));
        }
        Ok(self.superlevel(alpha).len())
    }

    /// `sup{α : m_p(α) ≤ t}`, capped at the density maximum.
    fn m_p_inverse(&self, t: f64) -> Result<f64> {
        let (mut lo, mut hi) = (0.0, self.max_pdf);
        if self.m_p(hi)? <= t {
            return Ok(hi);
        }
        while hi - lo > 1e-12 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if self.m_p(mid)? <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("alpha must be positive, got {alpha}")))
    }
}

/// Mass of the sublevel set `{x : p(x) ≤ α}`.
pub fn m_p(density: &Density, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    LevelScan::new(density)?.m_p(alpha)
}

/// Number of maximal intervals of `{x : p(x) > α}`.
pub fn c_p(density: &Density, alpha: f64) -> Result<usize> {
    check_alpha(alpha)?;
    LevelScan::new(density)?.c_p(alpha)
}

/// Largest density value found by the level scan.
pub fn max_pdf(density: &Density) -> Result<f64> {
    Ok(LevelScan::new(density)?.max_pdf)
}

/// `m_p⁻¹(t) = sup{α : m_p(α) ≤ t}`.
pub fn m_p_inverse(density: &Density, t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::invalid(format!("mass level must lie in [0, 1), got {t}")));
    }
    LevelScan::new(density)?.m_p_inverse(t)
}

pub fn profile(density: &Density, alphas: &[f64]) -> Result<ComplexityProfile> {
    if alphas.is_empty() || alphas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("alphas must be a non-empty increasing sequence"));
    }
    alphas.iter().try_for_each(|&a| check_alpha(a))?;
    let scan = LevelScan::new(density)?;
    Ok(ComplexityProfile {
        alphas: alphas.to_vec(),
        m_values: alphas.iter().map(|&a| scan.m_p(a)).collect::<Result<_>>()?,
        c_values: alphas.iter().map(|&a| scan.c_p(a)).collect::<Result<_>>()?,
    })
}

/// Sample size `⌈ε⁻⁴ ln(1/ε) [ln(1/δ) + c_p(α*) + γ/α*²]⌉` with `α* = m_p⁻¹(ε²)`
/// and the leading constant taken to be 1.
pub fn sample_bound(query: &TheoryQuery) -> Result<SampleBound> {
    let TheoryQuery {
        epsilon,
        delta,
        gamma,
        ref density,
    } = *query;
    for (name, v) in [("epsilon", epsilon), ("delta", delta)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::invalid(format!("{name} must lie in (0, 1), got {v}")));
        }
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
    }
    let scan = LevelScan::new(density)?;
    let alpha = scan.m_p_inverse(epsilon * epsilon)?;
    if !(alpha > 0.0) {
        return Err(Error::Numerical(format!(
            "no density level carries mass {}",
            epsilon * epsilon
        )));
    }
    let c = scan.c_p(alpha)?;
    let raw = epsilon.powi(-4)
        * (1.0 / epsilon).ln()
        * ((1.0 / delta).ln() + c as f64 + gamma / (alpha * alpha));
    if !raw.is_finite() || raw >= u64::MAX as f64 {
        return Err(Error::Numerical(format!("sample bound overflows ({raw})")));
    }
    Ok(SampleBound {
        bound: raw.ceil() as u64,
        raw,
        m_p_inverse: alpha,
        c_p: c,
    })
}
