//! Analytic and sample-based marginals: evaluation, sampling, mass checks and
//! the reciprocal-density integral the 1D solver is built on.
//!
//! ```bash
//! cargo run --example densities
//! ```
use inforeg::density::Density;
use inforeg::quadrature::{integrate, QuadConfig};

fn main() -> inforeg::Result<()> {
    let bimodal = Density::mixture(vec![
        (0.5, Density::gaussian_1d(-2.0, 0.5)?),
        (0.5, Density::laplace(2.0, 0.6)?),
    ])?;
    let family = [
        ("uniform(0,1)", Density::uniform(0.0, 1.0)?),
        ("gaussian(0,1)", Density::gaussian_1d(0.0, 1.0)?),
        ("laplace(0,1)", Density::laplace(0.0, 1.0)?),
        ("bimodal", bimodal.clone()),
    ];
    println!("{:<14} {:>10} {:>12} {:>14}", "density", "p(0.5)", "mass", "int 1/p [0,1]");
    for (name, d) in &family {
        println!(
            "{:<14} {:>10.5} {:>12.8} {:>14.6}",
            name,
            d.pdf_1d(0.5)?,
            d.total_mass()?,
            d.reciprocal_integral(0.0, 1.0)?
        );
    }

    // The reciprocal integral grows quickly across a low-density valley.
    for (a, b) in [(-2.5, -1.5), (-1.0, 1.0), (-2.0, 2.0)] {
        println!("bimodal: int_{a}^{b} dx/p = {:.4e}", bimodal.reciprocal_integral(a, b)?);
    }

    // A KDE over a bimodal sample recovers the shape of the source density.
    let sample = bimodal.sample(400, 7)?;
    let kde = Density::kde(sample.clone(), 0.1)?;
    for x in [-2.0, 0.0, 2.0] {
        println!("x={x:>4}: true {:.4}  kde {:.4}", bimodal.pdf_1d(x)?, kde.pdf(&[x])?);
    }

    // The mean from the sample, against the analytic mean.
    let m = sample.iter().map(|x| x[0]).sum::<f64>() / sample.len() as f64;
    println!("sample mean {m:.3}, analytic {:.3}", bimodal.mean()[0]);

    // Quadrature on its own: a smooth integrand with a known value.
    let r = integrate(|x| x.sin().powi(2), 0.0, std::f64::consts::PI, &QuadConfig::default())?;
    println!("int_0^pi sin^2 = {:.12} (pi/2 = {:.12}), {} intervals", r.value, std::f64::consts::FRAC_PI_2, r.intervals);

    // Densities serialize to tagged JSON and back.
    let json = serde_json::to_string(&bimodal).expect("serializable");
    println!("{json}");
    assert_eq!(Density::from_json(&json)?, bimodal);
    Ok(())
}
