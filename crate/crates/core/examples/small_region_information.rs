//! Mutual information between x and y on a shrinking box, against the
//! quadratic expansion ½ ∇fᵀ cov ∇f / (f(1-f)); plus the isotropy check.
//!
//! ```bash
//! cargo run --example small_region_information
//! ```
use inforeg::density::Density;
use inforeg::theory::{isotropy_check, lemma3_sweep, lemma4_sweep, mi_region_check, LogisticQuadratic, RegionSpec, TestConditional, MI_DIAMETERS};
use nalgebra::{DMatrix, DVector};

fn main() -> inforeg::Result<()> {
    let region = RegionSpec {
        center: vec![0.3, -0.2],
        half_width: 0.2,
        conditional: TestConditional::LogisticQuadratic(LogisticQuadratic::new(
            0.2,
            vec![1.5, -0.7],
            vec![0.8, -0.4],
            vec![0.3, -0.2],
        )?),
        density: Density::gaussian(vec![0.0, 0.0], 1.0)?,
    };
    let report = mi_region_check(&region, &MI_DIAMETERS)?;
    println!("{:>8} {:>14} {:>14} {:>12}", "diam", "exact", "expansion", "abs error");
    for r in &report.rows {
        println!("{:>8} {:>14.6e} {:>14.6e} {:>12.3e}", r.diameter, r.exact, r.asymptotic, r.abs_error);
    }
    println!("fitted error order: {:.3}", report.fitted_order.unwrap_or(f64::NAN));

    // Only a scalar covariance gives a direction-independent quadratic form.
    let dirs = [vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.8]];
    let scalar = isotropy_check(&(DMatrix::identity(2, 2) * 0.5), &dirs)?;
    let skew = isotropy_check(&DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0])), &dirs)?;
    println!("isotropic spread {:.1e}, anisotropic spread {:.3}", scalar.spread, skew.spread);

    // The two inequalities behind the sample bound, on random instances.
    let l3 = lemma3_sweep(50, 1)?;
    let l4 = lemma4_sweep(50, 1)?;
    println!("information lower bound: {} violations, smallest margin {:.4}", l3.violations, l3.worst);
    println!("square-loss bound: {} violations, smallest slack {:.4}", l4.violations, l4.worst);
    Ok(())
}
