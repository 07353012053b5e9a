use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use inforeg::dataset::{read_csv, write_csv, Label, UnlabeledDataset};
use inforeg::density::Density;
use inforeg::harness::{emit_report, gen_two_gaussians, run_experiment, ExperimentConfig};
use inforeg::logistic::{FitConfig, Model, Regularizer};
use inforeg::nonparam1d::{fit_anchors, AnchorSet};
use inforeg::optimize::{fit, ContinuationSchedule, OptimizerConfig};
use inforeg::theory::{self, checks, RegionSpec, TheoryQuery};

#[derive(Parser)]
#[command(name = "inforeg", version, about = "Information regularization for semi-supervised classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one trial of the two-Gaussian problem as a dataset CSV.
    Gen {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        trial: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the trial's test set here.
        #[arg(long)]
        test_out: Option<PathBuf>,
    },
    /// Fit a regularized logistic model and write it as JSON.
    Fit(FitArgs),
    /// Write p(y=1|x) per row; prints the error rate over labeled rows.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the two-Gaussian comparison and write report.json and errors.csv.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        continuation: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit anchor conditionals in 1D and write the minimal-regularizer curve.
    Solve1d {
        #[arg(long)]
        density: String,
        /// Anchors CSV with header `x,y`.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Curve CSV (`x,f`); the summary JSON goes next to it.
        #[arg(long)]
        out: PathBuf,
    },
    #[command(subcommand)]
    Theory(TheoryCommand),
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    data: PathBuf,
    /// FitConfig JSON; flags given explicitly override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    reg: Option<RegArg>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    bias: bool,
    #[arg(long)]
    continuation: bool,
    #[arg(long)]
    newton: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegArg {
    None,
    L2,
    #[value(name = "info-emp")]
    InfoEmp,
    #[value(name = "info-kernel")]
    InfoKernel,
}

impl From<RegArg> for Regularizer {
    fn from(r: RegArg) -> Self {
        match r {
            RegArg::None => Regularizer::None,
            RegArg::L2 => Regularizer::L2,
            RegArg::InfoEmp => Regularizer::InfoEmpirical,
            RegArg::InfoKernel => Regularizer::InfoKernel,
        }
    }
}

#[derive(Subcommand)]
enum TheoryCommand {
    /// m_p and c_p over a grid of levels.
    Profile {
        #[arg(long)]
        density: String,
        /// Comma-separated increasing levels; default is 20 levels below the maximum.
        #[arg(long, value_delimiter = ',')]
        alphas: Vec<f64>,
        /// `.csv` writes a table, anything else JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample-size expression with its intermediate values.
    Bound {
        #[arg(long)]
        density: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        gamma: f64,
    },
    CheckLemma3(SweepArgs),
    CheckLemma4(SweepArgs),
    /// Small-region mutual information against its quadratic expansion.
    CheckMi {
        /// RegionSpec JSON; without it a random sweep runs.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    CheckIsotropy {
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Accepts either a path or inline JSON.
fn load_density(arg: &str) -> anyhow::Result<Density> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    Ok(Density::from_json(&text)?)
}

fn to_json<T: serde::Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn read_anchors(path: &Path) -> anyhow::Result<Vec<(f64, Label)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["x", "y"] {
        bail!("{}: expected header `x,y`", path.display());
    }
    let mut out = Vec::new();
    for rec in rdr.deserialize::<(f64, f64)>() {
        let (x, y) = rec.with_context(|| format!("parsing {}", path.display()))?;
        out.push((x, Label::from_sign(y)?));
    }
    Ok(out)
}

fn cmd_fit(a: FitArgs) -> anyhow::Result<()> {
    let (labeled, unlabeled) = read_csv(&a.data)?;
    let mut cfg: FitConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => FitConfig::default(),
    };
    if let Some(r) = a.reg {
        cfg.regularizer = r.into();
    }
    if let Some(l) = a.lambda {
        cfg.lambda = l;
    }
    if a.tau.is_some() {
        cfg.tau = a.tau;
    }
    if let Some(r) = a.restarts {
        cfg.restarts = r;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    cfg.bias |= a.bias;
    let opt = if a.newton {
        OptimizerConfig::newton()
    } else {
        OptimizerConfig::default()
    };
    let schedule = a.continuation.then(|| ContinuationSchedule::default_for(cfg.lambda)).transpose()?;
    let result = fit(&labeled, &unlabeled, &cfg, &opt, schedule.as_ref())?;
    let model = Model::from_fit(&result, &cfg);
    fs::write(&a.out, serde_json::to_string_pretty(&model)?).with_context(|| format!("writing {}", a.out.display()))?;
    println!("objective {} (restart {})", result.objective, result.restart_index);
    Ok(())
}

fn cmd_predict(model: &Path, data: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let model: Model = read_json(model)?;
    let (labeled, unlabeled) = read_csv(data)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let d = labeled.dim().or(unlabeled.dim()).context("dataset is empty")?;
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.push("p".into());
    w.write_record(&header)?;
    for x in labeled.points.iter().chain(&unlabeled.points) {
        let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
        row.push(model.predict(x)?.to_string());
        w.write_record(&row)?;
    }
    write_out(out, String::from_utf8(w.into_inner()?)?.trim_end())?;
    if !labeled.is_empty() {
        eprintln!("error rate on labeled rows: {}", model.error_rate(&labeled)?);
    }
    Ok(())
}

fn cmd_solve1d(density: &str, data: &Path, lambda: f64, grid: usize, out: &Path) -> anyhow::Result<()> {
    let density = load_density(density)?;
    let anchors = AnchorSet::new(&read_anchors(data)?)?;
    let result = fit_anchors(&anchors, &density, lambda)?;
    let mut w = csv::Writer::from_path(out).with_context(|| format!("writing {}", out.display()))?;
    w.write_record(["x", "f"])?;
    for (x, f) in result.conditional.emit_curve(grid)? {
        w.write_record([x.to_string(), f.to_string()])?;
    }
    w.flush()?;
    let summary = serde_json::to_string_pretty(&result.summary())?;
    let summary_path = out.with_extension("json");
    fs::write(&summary_path, &summary).with_context(|| format!("writing {}", summary_path.display()))?;
    println!("{summary}");
    Ok(())
}

fn cmd_theory(cmd: TheoryCommand) -> anyhow::Result<()> {
    match cmd {
        TheoryCommand::Profile { density, alphas, out } => {
            let density = load_density(&density)?;
            let alphas = if alphas.is_empty() {
                let top = theory::max_pdf(&density)?;
                (1..=20).map(|i| top * i as f64 / 21.0).collect()
            } else {
                alphas
            };
            let p = theory::profile(&density, &alphas)?;
            let text = if out.as_ref().is_some_and(|o| o.extension().is_some_and(|e| e == "csv")) {
                let mut s = String::from("alpha,m_p,c_p\n");
                for i in 0..p.alphas.len() {
                    s += &format!("{},{},{}\n", p.alphas[i], p.m_values[i], p.c_values[i]);
                }
                s
            } else {
                to_json(&p)?
            };
            write_out(out.as_deref(), text.trim_end())
        }
        TheoryCommand::Bound {
            density,
            epsilon,
            delta,
            gamma,
        } => {
            let q = TheoryQuery {
                epsilon,
                delta,
                gamma,
                density: load_density(&density)?,
            };
            println!("{}", to_json(&theory::sample_bound(&q)?)?);
            Ok(())
        }
        TheoryCommand::CheckLemma3(s) => finish_sweep(theory::lemma3_sweep(s.trials, s.seed)?, s.out.as_deref()),
        TheoryCommand::CheckLemma4(s) => finish_sweep(theory::lemma4_sweep(s.trials, s.seed)?, s.out.as_deref()),
        TheoryCommand::CheckMi { config: Some(path), sweep } => {
            let region: RegionSpec = read_json(&path)?;
            let diameters: Vec<f64> = checks::MI_DIAMETERS.iter().map(|d| d * region.half_width / 0.2).collect();
            let report = theory::mi_region_check(&region, &diameters)?;
            write_out(sweep.out.as_deref(), &to_json(&report)?)?;
            ensure_pass(report.pass)
        }
        TheoryCommand::CheckMi { config: None, sweep } => {
            finish_sweep(theory::mi_sweep(sweep.trials, sweep.seed)?, sweep.out.as_deref())
        }
        TheoryCommand::CheckIsotropy { dim, sweep } => {
            if dim == 0 {
                bail!("dim must be at least 1");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(sweep.seed);
            let dirs: Vec<Vec<f64>> = (0..sweep.trials).map(|_| checks::random_unit(&mut rng, dim)).collect();
            let scalar = nalgebra::DMatrix::<f64>::identity(dim, dim) * 3.0;
            let iso = theory::isotropy_check(&scalar, &dirs)?;
            let mut diag = nalgebra::DMatrix::<f64>::identity(dim, dim);
            if dim > 1 {
                diag[(1, 1)] = 2.0;
            }
            let axes: Vec<Vec<f64>> = (0..dim)
                .map(|i| (0..dim).map(|j| f64::from(u8::from(i == j))).collect())
                .collect();
            let aniso = theory::isotropy_check(&diag, &axes)?;
            let pass = iso.spread <= 1e-12 && (dim == 1 || aniso.spread >= 0.5);
            let report = serde_json::json!({
                "scalar": iso,
                "anisotropic": aniso,
                "pass": pass,
            });
            write_out(sweep.out.as_deref(), &serde_json::to_string_pretty(&report)?)?;
            ensure_pass(pass)
        }
    }
}

fn finish_sweep(report: checks::SweepReport, out: Option<&Path>) -> anyhow::Result<()> {
    write_out(out, &serde_json::to_string_pretty(&report)?)?;
    ensure_pass(report.pass)
}

fn ensure_pass(pass: bool) -> anyhow::Result<()> {
    if pass {
        Ok(())
    } else {
        Err(inforeg::Error::Numerical("check failed".into()).into())
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen {
            config,
            seed,
            trial,
            out,
            test_out,
        } => {
            let mut cfg: ExperimentConfig = match &config {
                Some(p) => read_json(p)?,
                None => ExperimentConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let data = gen_two_gaussians(&cfg, trial)?;
            write_csv(&out, &data.labeled, &data.unlabeled)?;
            if let Some(t) = test_out {
                write_csv(&t, &data.test, &UnlabeledDataset::default())?;
            }
            Ok(())
        }
        Command::Fit(a) => cmd_fit(a),
        Command::Predict { model, data, out } => cmd_predict(&model, &data, out.as_deref()),
        Command::Experiment {
            config,
            trials,
            seed,
            restarts,
            continuation,
            out,
        } => {
            let mut cfg: ExperimentConfig = match &config {
                Some(p) => read_json(p)?,
                None => ExperimentConfig::default(),
            };
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(r) = restarts {
                cfg.restarts = r;
            }
            cfg.continuation |= continuation;
            let report = run_experiment(&cfg)?;
            let (json, csv) = emit_report(&report, &out)?;
            for m in &report.methods {
                println!(
                    "{:<15} mean error {:.4}  se {:.4}  failures {}",
                    m.method.name(),
                    m.mean_error,
                    m.std_error,
                    m.failures.len()
                );
            }
            println!("wrote {} and {}", json.display(), csv.display());
            Ok(())
        }
        Command::Solve1d {
            density,
            data,
            lambda,
            grid,
            out,
        } => cmd_solve1d(&density, &data, lambda, grid, &out),
        Command::Theory(t) => cmd_theory(t),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let numerical = e.downcast_ref::<inforeg::Error>().is_some_and(inforeg::Error::is_numerical);
            ExitCode::from(if numerical { 2 } else { 1 })
        }
    }
}
