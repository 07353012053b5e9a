//! Fitting the regularized logistic model on one draw of the two-Gaussian
//! problem, with cold restarts, λ continuation and Newton steps.
//!
//! ```bash
//! cargo run --example fit_logistic
//! ```
use inforeg::harness::{gen_two_gaussians, ExperimentConfig};
use inforeg::logistic::{error_rate, FitConfig, Model, Regularizer};
use inforeg::optimize::{fit, ContinuationSchedule, OptimizerConfig};

fn main() -> inforeg::Result<()> {
    let data = gen_two_gaussians(&ExperimentConfig::default(), 3)?;
    let gradient = OptimizerConfig::default();
    let newton = OptimizerConfig::newton();
    let lambda = 10.0;

    let configs = [
        FitConfig::new(Regularizer::None, 0.0),
        FitConfig::new(Regularizer::L2, lambda),
        FitConfig::new(Regularizer::InfoEmpirical, lambda),
        FitConfig::new(Regularizer::InfoKernel, lambda).with_tau(0.25),
    ];
    println!("{:<15} {:>10} {:>22} {:>8}", "regularizer", "objective", "theta", "error");
    for cfg in &configs {
        let r = fit(&data.labeled, &data.unlabeled, cfg, &gradient, None)?;
        let th = r.theta.as_slice();
        println!(
            "{:<15} {:>10.4} {:>10.4},{:>10.4} {:>8.4}",
            cfg.regularizer.name(),
            r.objective,
            th[0],
            th[1],
            error_rate(&r.theta, &data.test)?
        );
    }

    // Continuation solves a ladder of λ values, each warm-started.
    let cfg = FitConfig::new(Regularizer::InfoEmpirical, lambda);
    let schedule = ContinuationSchedule::default_for(lambda)?;
    let warm = fit(&data.labeled, &data.unlabeled, &cfg, &gradient, Some(&schedule))?;
    println!("continuation over {:?}: objective {:.6}", schedule.lambdas(), warm.objective);

    let nt = fit(&data.labeled, &data.unlabeled, &cfg, &newton, None)?;
    println!(
        "newton: objective {:.6} after {} steps (gradient ascent: {} steps)",
        nt.objective,
        nt.trace.len() - 1,
        fit(&data.labeled, &data.unlabeled, &cfg, &gradient, None)?.trace.len() - 1
    );

    // Models carry their config and serialize for the CLI's `predict`.
    let model = Model::from_fit(&nt, &cfg);
    println!("p(y=1 | x=(1, 0)) = {:.4}", model.predict(&[1.0, 0.0])?);
    println!("{}", serde_json::to_string_pretty(&model).expect("serializable"));
    Ok(())
}
