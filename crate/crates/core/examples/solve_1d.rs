//! The nonparametric solution in one dimension: given labeled anchors and a
//! marginal, the conditional that maximizes likelihood minus the information
//! penalty. On a bimodal marginal the label flips inside the valley.
//!
//! ```bash
//! cargo run --example solve_1d
//! ```
use inforeg::dataset::Label;
use inforeg::density::Density;
use inforeg::nonparam1d::{fit_anchors, interval_regularizer, AnchorSet, Conditional1D};

fn bar(f: f64) -> String {
    let n = (f * 40.0).round() as usize;
    format!("{}{}", "#".repeat(n), ".".repeat(40 - n))
}

fn main() -> inforeg::Result<()> {
    // Uniform marginal: closed form on one interval.
    println!("uniform, 0.25 -> 0.75: {:.5}", interval_regularizer(0.25, 0.75, 1.0)?);

    let valley = Density::mixture(vec![
        (0.5, Density::gaussian_1d(-2.0, 0.4)?),
        (0.5, Density::gaussian_1d(2.0, 0.4)?),
    ])?;
    let anchors = AnchorSet::new(&[
        (-3.0, Label::Neg),
        (-2.2, Label::Neg),
        (1.5, Label::Pos),
        (2.8, Label::Pos),
        (2.5, Label::Neg),
    ])?;
    for lambda in [0.1, 1.0, 10.0] {
        let fit = fit_anchors(&anchors, &valley, lambda)?;
        let s = fit.summary();
        println!(
            "lambda {lambda:>4}: objective {:.4}, penalty {:.4}, anchors {:?}",
            s.objective,
            s.regularizer,
            s.anchor_values.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>()
        );
    }

    let fit = fit_anchors(&anchors, &valley, 1.0)?;
    println!("\np(y=1|x) at lambda 1:");
    for (x, f) in fit.conditional.emit_curve(25)? {
        println!("{x:>6.2} {:.3} {}", f, bar(f));
    }

    // Same endpoints on a flat marginal spread the change evenly.
    let flat = Conditional1D::new(Density::uniform(-3.0, 3.0)?, vec![-3.0, 3.0], vec![0.1, 0.9])?;
    let gap = Conditional1D::new(valley, vec![-3.0, 3.0], vec![0.1, 0.9])?;
    println!("\n{:>6} {:>8} {:>8}", "x", "flat", "valley");
    for x in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        println!("{x:>6.1} {:>8.4} {:>8.4}", flat.evaluate(x)?, gap.evaluate(x)?);
    }
    Ok(())
}
