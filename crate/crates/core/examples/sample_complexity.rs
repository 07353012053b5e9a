//! Complexity of a marginal (sublevel mass m_p and superlevel run count c_p)
//! and the sample-size expression built from them.
//!
//! ```bash
//! cargo run --example sample_complexity
//! ```
use inforeg::density::Density;
use inforeg::theory::{c_p, m_p, m_p_inverse, max_pdf, profile, sample_bound, TheoryQuery};

fn main() -> inforeg::Result<()> {
    let densities = [
        ("uniform(0,1)", Density::uniform(0.0, 1.0)?),
        ("gaussian(0,1)", Density::gaussian_1d(0.0, 1.0)?),
        (
            "two bumps",
            Density::mixture(vec![
                (0.5, Density::gaussian_1d(-3.0, 1.0)?),
                (0.5, Density::gaussian_1d(3.0, 1.0)?),
            ])?,
        ),
    ];

    let g = &densities[1].1;
    println!("gaussian: m_p(0.1) = {:.5}, c_p(0.1) = {}", m_p(g, 0.1)?, c_p(g, 0.1)?);
    println!("two bumps: c_p(0.05) = {}", c_p(&densities[2].1, 0.05)?);

    for (name, d) in &densities {
        let top = max_pdf(d)?;
        let alphas: Vec<f64> = (1..=5).map(|i| top * i as f64 / 6.0).collect();
        let p = profile(d, &alphas)?;
        println!("\n{name} (max pdf {top:.4})");
        for ((a, m), c) in p.alphas.iter().zip(&p.m_values).zip(&p.c_values) {
            println!("  alpha {a:.4}  m_p {m:.5}  c_p {c}");
        }
        println!("  m_p^-1(0.01) = {:.5}", m_p_inverse(d, 0.01)?);
    }

    println!("\n{:<14} {:>6} {:>6} {:>6} {:>14}", "density", "eps", "delta", "gamma", "bound");
    for (name, d) in &densities {
        for (epsilon, delta, gamma) in [(0.2, 0.1, 1.0), (0.1, 0.1, 1.0), (0.1, 0.1, 4.0)] {
            let b = sample_bound(&TheoryQuery {
                epsilon,
                delta,
                gamma,
                density: d.clone(),
            })?;
            println!("{name:<14} {epsilon:>6} {delta:>6} {gamma:>6} {:>14}", b.bound);
        }
    }
    Ok(())
}
