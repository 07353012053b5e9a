//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use inforeg::density::Density;
use inforeg::nonparam1d::{g_transform, CLAMP};
use nalgebra::{DMatrix, SymmetricEigen};

/// Central finite-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let a = f(&y);
            y[i] = x[i] - h;
            let b = f(&y);
            y[i] = x[i];
            (a - b) / (2.0 * h)
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Discretized `∫_a^b p f'²/(f(1-f)) dx` minimized over interior grid values
/// with fixed ends; `n` grid points including both ends.
pub struct BruteForce {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub value: f64,
}

fn k(v: f64) -> f64 {
    1.0 / (v * (1.0 - v))
}
fn k1(v: f64) -> f64 {
    let phi = v * (1.0 - v);
    -(1.0 - 2.0 * v) / (phi * phi)
}
fn k2(v: f64) -> f64 {
    let phi = v * (1.0 - v);
    2.0 / (phi * phi) + 2.0 * (1.0 - 2.0 * v).powi(2) / phi.powi(3)
}

fn discrete_value(w: &[f64], f: &[f64]) -> f64 {
    w.iter()
        .enumerate()
        .map(|(i, wi)| {
            let d = f[i + 1] - f[i];
            0.5 * wi * d * d * (k(f[i]) + k(f[i + 1]))
        })
        .sum()
}

/// Solves a tridiagonal system (Thomas algorithm); `None` on a zero pivot.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut piv = diag[0];
    if piv.abs() < 1e-300 {
        return None;
    }
    c[0] = if n > 1 { sup[0] / piv } else { 0.0 };
    d[0] = rhs[0] / piv;
    for i in 1..n {
        piv = diag[i] - sub[i - 1] * c[i - 1];
        if piv.abs() < 1e-300 {
            return None;
        }
        if i < n - 1 {
            c[i] = sup[i] / piv;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / piv;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    Some(d)
}

pub fn brute_force_1d(density: &Density, a: f64, b: f64, fa: f64, fb: f64, n: usize) -> BruteForce {
    let dx = (b - a) / (n - 1) as f64;
    let x: Vec<f64> = (0..n).map(|i| a + dx * i as f64).collect();
    let w: Vec<f64> = (0..n - 1)
        .map(|i| density.pdf_1d(0.5 * (x[i] + x[i + 1])).unwrap() / dx)
        .collect();
    // Start from the straight line in f.
    let mut f: Vec<f64> = (0..n).map(|i| fa + (fb - fa) * i as f64 / (n - 1) as f64).collect();
    let mut value = discrete_value(&w, &f);
    let m = n - 2;
    let mut mu = 0.0;
    for _ in 0..200 {
        let mut grad = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut off = vec![0.0; n - 1];
        for i in 0..n - 1 {
            let (u, v) = (f[i], f[i + 1]);
            let d = v - u;
            let kk = k(u) + k(v);
            let h = 0.5 * w[i];
            grad[i] += h * (-2.0 * d * kk + d * d * k1(u));
            grad[i + 1] += h * (2.0 * d * kk + d * d * k1(v));
            diag[i] += h * (2.0 * kk - 4.0 * d * k1(u) + d * d * k2(u));
            diag[i + 1] += h * (2.0 * kk + 4.0 * d * k1(v) + d * d * k2(v));
            off[i] += h * (-2.0 * kk - 2.0 * d * k1(v) + 2.0 * d * k1(u));
        }
        let gnorm = grad[1..n - 1].iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-11 * (1.0 + value) {
            break;
        }
        let rhs: Vec<f64> = grad[1..n - 1].iter().map(|g| -g).collect();
        let dg: Vec<f64> = diag[1..n - 1].iter().map(|d| d + mu).collect();
        let Some(step) = thomas(&off[1..m], &dg, &off[1..m], &rhs) else {
            mu = (mu * 10.0).max(1e-6);
            continue;
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = (0..n)
                .map(|i| if i == 0 || i == n - 1 { f[i] } else { f[i] + t * step[i - 1] })
                .collect();
            if cand.iter().all(|v| *v > 0.0 && *v < 1.0) {
                let cv = discrete_value(&w, &cand);
                if cv <= value {
                    f = cand;
                    value = cv;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            if mu > 1e6 {
                break;
            }
            mu = (mu * 10.0).max(1e-6);
        } else {
            mu *= 0.1;
        }
    }
    BruteForce { x, f, value }
}

/// Probabilists' Gauss–Hermite rule (weight `e^{-z²/2}/√(2π)`) by Golub–Welsch.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64).sqrt();
        j[(i, i - 1)] = b;
        j[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `E[g(c + √τ z)]` for `z ~ N(0, I_d)` by a tensor Gauss–Hermite rule.
pub fn gaussian_expectation(g: impl Fn(&[f64]) -> f64, c: &[f64], tau: f64, nodes: usize) -> f64 {
    let (z, w) = gauss_hermite(nodes);
    let d = c.len();
    let total = nodes.pow(d as u32);
    let s = tau.sqrt();
    let mut x = vec![0.0; d];
    let mut sum = 0.0;
    for idx in 0..total {
        let mut weight = 1.0;
        let mut r = idx;
        for i in 0..d {
            let k = r % nodes;
            r /= nodes;
            x[i] = c[i] + s * z[k];
            weight *= w[k];
        }
        sum += weight * g(&x);
    }
    sum
}

use inforeg::dataset::{Label, LabeledDataset, UnlabeledDataset};
use inforeg::logistic::{self, FitConfig, Regularizer, Theta};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_vec(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-scale..scale)).collect()
}

pub fn random_problem(rng: &mut ChaCha8Rng, d: usize, n: usize, m: usize) -> (LabeledDataset, UnlabeledDataset) {
    let points: Vec<Vec<f64>> = (0..n).map(|_| random_vec(rng, d, 2.0)).collect();
    let labels = (0..n)
        .map(|_| if rng.random_bool(0.5) { Label::Pos } else { Label::Neg })
        .collect();
    let unl = (0..m).map(|_| random_vec(rng, d, 2.0)).collect();
    (
        LabeledDataset::new(points, labels).unwrap(),
        UnlabeledDataset::new(unl).unwrap(),
    )
}

/// Every objective variant with its configuration, in a fixed order.
pub fn objective_variants(lambda: f64, tau: f64) -> Vec<(&'static str, FitConfig)> {
    let mut emp_off = FitConfig::new(Regularizer::InfoEmpirical, lambda);
    emp_off.include_theta_norm_factor = false;
    vec![
        ("none", FitConfig::new(Regularizer::None, 0.0)),
        ("l2", FitConfig::new(Regularizer::L2, lambda)),
        ("info_empirical/on", FitConfig::new(Regularizer::InfoEmpirical, lambda)),
        ("info_empirical/off", emp_off),
        ("info_kernel", FitConfig::new(Regularizer::InfoKernel, lambda).with_tau(tau)),
    ]
}

fn vec_rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-8);
    diff / scale
}

/// Worst relative gap between analytic and central-difference gradients
/// (step 1e-5) over `instances` random problems with `d ≤ 5`, `≤ 50` points.
pub fn gradient_sweep(seed: u64, instances: usize) -> (f64, String) {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let mut worst = (0.0, String::new());
    for i in 0..instances {
        let d = rng.random_range(1..=5);
        let n = rng.random_range(2..=25);
        let m = rng.random_range(1..=25);
        let (lab, unl) = random_problem(&mut rng, d, n, m);
        let theta = Theta::new(random_vec(&mut rng, d, 1.5)).unwrap();
        let lambda = rng.random_range(0.1..5.0);
        let tau = rng.random_range(0.05..2.0);
        for (name, cfg) in objective_variants(lambda, tau) {
            let analytic = logistic::objective_gradient(&theta, &lab, &unl, &cfg).unwrap();
            let f = |t: &[f64]| logistic::objective(&Theta::new(t.to_vec()).unwrap(), &lab, &unl, &cfg).unwrap();
            let fd = fd_gradient(f, theta.as_slice(), 1e-5);
            let e = vec_rel_err(&analytic, &fd);
            if e > worst.0 {
                worst = (e, format!("instance {i} {name}"));
            }
        }
    }
    worst
}

/// Kernel regularizer integrated directly: the average over points of
/// `E[‖θ‖² ¼ exp(-¼(θᵀx)²)]` with `x ~ N(x'_j, τI)`.
pub fn kernel_oracle(theta: &[f64], points: &[Vec<f64>], tau: f64) -> f64 {
    let n2: f64 = theta.iter().map(|t| t * t).sum();
    let g = |x: &[f64]| {
        let s: f64 = theta.iter().zip(x).map(|(a, b)| a * b).sum();
        n2 * 0.25 * (-0.25 * s * s).exp()
    };
    let nodes = if theta.len() == 3 { 40 } else { 60 };
    points.iter().map(|c| gaussian_expectation(g, c, tau, nodes)).sum::<f64>() / points.len() as f64
}

/// Worst relative gap between the closed-form kernel regularizer and
/// [`kernel_oracle`] over `draws` random problems in `d ≤ 3`.
pub fn kernel_quadrature_sweep(seed: u64, draws: usize) -> (f64, String) {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let mut worst = (0.0, String::new());
    for i in 0..draws {
        let d = rng.random_range(1..=3);
        let m = rng.random_range(1..=8);
        let points: Vec<Vec<f64>> = (0..m).map(|_| random_vec(&mut rng, d, 2.0)).collect();
        let theta = random_vec(&mut rng, d, 1.5);
        let tau = rng.random_range(0.05..2.0);
        let closed = logistic::info_reg_kernel(
            &Theta::new(theta.clone()).unwrap(),
            &UnlabeledDataset::new(points.clone()).unwrap(),
            tau,
        )
        .unwrap();
        let e = rel_err(closed, kernel_oracle(&theta, &points, tau));
        if e > worst.0 {
            worst = (e, format!("draw {i} (d={d}, m={m}, tau={tau:.3})"));
        }
    }
    worst
}

/// Worst relative gap between the kernel regularizer at `τ = 1e-12` and
/// `‖θ‖² (1/4m) Σ exp(-¼(θᵀx'_j)²)`.
pub fn small_tau_sweep(seed: u64, draws: usize) -> f64 {
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..draws {
        let d = rng.random_range(1..=5);
        let m = rng.random_range(1..=50);
        let points: Vec<Vec<f64>> = (0..m).map(|_| random_vec(&mut rng, d, 3.0)).collect();
        let theta = random_vec(&mut rng, d, 3.0);
        let n2: f64 = theta.iter().map(|t| t * t).sum();
        let limit = n2 / (4.0 * m as f64)
            * points
                .iter()
                .map(|x| {
                    let s: f64 = theta.iter().zip(x).map(|(a, b)| a * b).sum();
                    (-0.25 * s * s).exp()
                })
                .sum::<f64>();
        let v = logistic::info_reg_kernel(
            &Theta::new(theta).unwrap(),
            &UnlabeledDataset::new(points).unwrap(),
            1e-12,
        )
        .unwrap();
        worst = worst.max(rel_err(v, limit));
    }
    worst
}

/// Random 1D density with an interval `[a, b]` and endpoint values at least
/// 0.2 apart.
pub fn random_instance(rng: &mut ChaCha8Rng, i: usize) -> (Density, f64, f64, f64, f64) {
    let density = match i % 4 {
        0 => Density::uniform(-1.0, 2.0).unwrap(),
        1 => Density::gaussian_1d(rng.random_range(-0.5..0.5), rng.random_range(0.3..1.5)).unwrap(),
        2 => Density::laplace(rng.random_range(-0.5..0.5), rng.random_range(0.4..1.2)).unwrap(),
        _ => Density::mixture(vec![
            (0.5, Density::gaussian_1d(-0.8, 0.3).unwrap()),
            (0.5, Density::gaussian_1d(0.9, 0.4).unwrap()),
        ])
        .unwrap(),
    };
    let a = rng.random_range(-1.0..0.0);
    let b = a + rng.random_range(0.5..1.5);
    let fa: f64 = rng.random_range(0.05..0.95);
    let mut fb: f64 = rng.random_range(0.05..0.95);
    if (fa - fb).abs() < 0.2 {
        fb = if fa < 0.5 { fa + 0.3 } else { fa - 0.3 };
    }
    (density, a, b, fa, fb)
}

/// Best two-anchor objective over a 400² grid of endpoint values.
pub fn grid_search_two_anchors(lambda: f64) -> f64 {
    let n = 400;
    let vals: Vec<f64> = (0..n)
        .map(|i| CLAMP + (1.0 - 2.0 * CLAMP) * i as f64 / (n - 1) as f64)
        .collect();
    let mut best = f64::NEG_INFINITY;
    for &f0 in &vals {
        for &f1 in &vals {
            let dg = g_transform(f1) - g_transform(f0);
            best = best.max(f0.ln() + (1.0 - f1).ln() - lambda * dg * dg);
        }
    }
    best
}
