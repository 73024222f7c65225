//! `slqc-opt`: run normalized-gradient experiments, property checks and the
//! minibatch lower-bound simulation from the command line.

mod analysis;
mod check;
mod config;
mod error;
mod problem;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::check::{Alpha, CheckArgs, ProblemName, Property};
use crate::error::{is_usage, usage};

const JOBS_ENV: &str = "SLQC_OPT_JOBS";

#[derive(Parser, Debug)]
#[command(name = "slqc-opt", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Root seed; overrides the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config file.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Seeded runs (run), sampled points or pairs (check), or walks (lowerbound).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Worker threads. SLQC_OPT_JOBS takes precedence.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a property of a named problem and write a JSON report.
    Check {
        problem: ProblemName,
        property: Property,
        /// Accuracies to test (slqc).
        #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1")]
        eps_grid: Vec<f64>,
        /// SLQC constant; defaults to the problem's known value.
        #[arg(long)]
        kappa: Option<f64>,
        /// Sublevel threshold (sublevel): `auto` or a number.
        #[arg(long, default_value = "auto")]
        alpha: Alpha,
        /// Ball radius around the optimum (lipschitz, smooth).
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Lipschitz constant G or smoothness β (lipschitz, smooth).
        #[arg(long)]
        constant: Option<f64>,
        /// Dimension for problems that take one.
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Simulate SNGD with too-small minibatches on the lower-bound distribution.
    Lowerbound {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        iterations: u64,
    },
    /// Print iteration and minibatch budgets as JSON.
    Budgets {
        #[arg(long)]
        eps: f64,
        /// SLQC constant (NGD and SNGD budgets).
        #[arg(long)]
        kappa: Option<f64>,
        /// Smoothness (smooth NGD budget).
        #[arg(long)]
        beta: Option<f64>,
        /// Initial distance to the optimum.
        #[arg(long, default_value_t = 1.0)]
        dist0: f64,
        /// Failure probability (SNGD and GLM sample budgets).
        #[arg(long)]
        delta: Option<f64>,
        /// Bound on the component magnitudes.
        #[arg(long = "m", default_value_t = 1.0)]
        m_bound: f64,
        /// Predictor radius for the GLM sample budget.
        #[arg(long)]
        w_radius: Option<f64>,
    },
}

/// Thread count from the environment, then the flag.
fn resolve_jobs(flag: Option<usize>) -> anyhow::Result<Option<usize>> {
    let jobs = match std::env::var(JOBS_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("{JOBS_ENV} must be a positive integer, got `{v}`")))?,
        ),
        Err(std::env::VarError::NotPresent) => flag,
        Err(e) => return Err(usage(format!("{JOBS_ENV}: {e}"))),
    };
    if jobs == Some(0) {
        return Err(usage("jobs must be ≥ 1"));
    }
    Ok(jobs)
}

fn default_out_dir(global: &GlobalArgs) -> PathBuf {
    global
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(n) = resolve_jobs(cli.global.jobs)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let g = &cli.global;
    match cli.command {
        Command::Run { config } => {
            let overrides = run::Overrides {
                seed: g.seed,
                trials: g.trials,
                out_dir: g.out_dir.clone(),
            };
            let out = run::cmd_run(&config, &overrides)?;
            for r in &out.summary.runs {
                let best = r
                    .best_value
                    .map(|v| format!("{v:.6e}"))
                    .unwrap_or_else(|| "-".into());
                let exact = r
                    .returned_exact
                    .map(|v| format!("{v:.6e}"))
                    .unwrap_or_else(|| "-".into());
                let b = r.b.map(|b| format!(" b={b}")).unwrap_or_default();
                println!(
                    "trial {}{b}: best {best}, exact at returned {exact}, {}",
                    r.trial, r.trace_csv
                );
            }
            println!("summary: {}", out.summary_path.display());
            if out.any_aborted() {
                eprintln!("error: at least one run aborted on a non-finite value; see the summary");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Check {
            problem,
            property,
            eps_grid,
            kappa,
            alpha,
            radius,
            constant,
            dim,
        } => {
            let args = CheckArgs {
                problem,
                property,
                eps_grid,
                kappa,
                alpha,
                radius,
                constant,
                dim,
                trials: g.trials,
                seed: g.seed.unwrap_or(0),
                out_dir: default_out_dir(g),
            };
            let (report, path) = check::cmd_check(&args)?;
            println!("{}", check::describe(&report));
            println!("report: {}", path.display());
        }
        Command::Lowerbound { eps, iterations } => {
            let trials = g.trials.unwrap_or(100_000);
            let (report, path) = analysis::cmd_lowerbound(
                eps,
                trials,
                iterations,
                g.seed.unwrap_or(0),
                &default_out_dir(g),
            )?;
            println!(
                "eps={} b={} trials={} hits={} hit_fraction={:.3e} (max {:.1e}, analytic ceiling {:.3e}) P(step toward optimum)={:.5} P(mean<0)={:.5}",
                report.eps,
                report.b,
                report.trials,
                report.hits,
                report.hit_fraction,
                report.max_hit_fraction,
                report.analytic_ceiling,
                report.p_hat,
                report.negative_mean_fraction,
            );
            println!("report: {}", path.display());
            if !report.passed {
                eprintln!("error: the empirical results exceed the declared bounds");
                return Ok(ExitCode::from(1));
            }
        }
        Command::Budgets {
            eps,
            kappa,
            beta,
            dist0,
            delta,
            m_bound,
            w_radius,
        } => {
            let table = analysis::cmd_budgets(&analysis::BudgetArgs {
                eps,
                kappa,
                beta,
                dist0,
                delta,
                m_bound,
                w_radius,
            })?;
            println!("{}", serde_json::to_string_pretty(&table)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version.
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_usage(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
