//! The three penalties on a logistic parameter, traced along a ray θ = t·u.
//!
//! Near θ = 0 the information regularizer behaves like ‖θ‖²/4; further out
//! it only charges for decision boundaries that pass through unlabeled mass.
//!
//! ```bash
//! cargo run --example regularizers
//! ```
use inforeg::dataset::UnlabeledDataset;
use inforeg::density::Density;
use inforeg::logistic::{info_reg_empirical, info_reg_kernel, sigma_product, gauss_approx_sigma_product, Theta};

fn main() -> inforeg::Result<()> {
    // Two clusters along the first axis; unlabeled only.
    let clusters = Density::mixture(vec![
        (0.5, Density::gaussian(vec![-2.0, 0.0], 0.3)?),
        (0.5, Density::gaussian(vec![2.0, 0.0], 0.3)?),
    ])?;
    let unlabeled = UnlabeledDataset::new(clusters.sample(200, 3)?)?;

    for (label, u) in [("boundary in the gap  ", [1.0, 0.0]), ("boundary through both", [0.0, 1.0])] {
        println!("{label}:");
        println!("  {:>5} {:>10} {:>12} {:>12} {:>12}", "t", "l2", "emp(flag)", "emp(raw)", "kernel");
        for t in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
            let theta = Theta::new(vec![t * u[0], t * u[1]])?;
            println!(
                "  {:>5} {:>10.4} {:>12.5} {:>12.5} {:>12.5}",
                t,
                theta.norm_sq(),
                info_reg_empirical(&theta, &unlabeled, true)?,
                info_reg_empirical(&theta, &unlabeled, false)?,
                info_reg_kernel(&theta, &unlabeled, 0.25)?,
            );
        }
    }

    // The kernel form swaps σ(s)σ(-s) for a Gaussian bump.
    let worst = (0..=2000)
        .map(|i| -10.0 + i as f64 * 0.01)
        .map(|s| (sigma_product(s) - gauss_approx_sigma_product(s)).abs())
        .fold(0.0, f64::max);
    println!("max |σσ(s) - ¼exp(-s²/4)| on [-10, 10]: {worst:.4}");
    Ok(())
}
