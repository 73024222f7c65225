//! `run`: seeded optimizer runs and minibatch sweeps.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use slqc::objective::Degenerate;
use slqc::optimizers::{
    gd, msgd, nesterov, ngd, ngd_with_oracle, sgd, sngd, NgdConfig, SngdConfig, StepSchedule,
};
use slqc::properties::sample_in;
use slqc::trace::fmt_f64;
use slqc::{seeded_stream, Error, OptTrace, Point, StochasticObjective, Stream, TraceStatus};

use crate::config::{ExperimentConfig, OptimizerName, OptimizerSpec, StartRule, StartSpec};
use crate::error::{setup, usage};
use crate::problem::{self, Model, Problem};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

/// Command-line values that replace the config file's.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub schema_version: u32,
    /// The configuration after command-line overrides.
    pub config: ExperimentConfig,
    pub optimum_value: Option<f64>,
    pub runs: Vec<RunRecord>,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub trial: u64,
    pub b: Option<usize>,
    /// File names relative to the output directory.
    pub trace_csv: String,
    pub trace_json: Option<String>,
    pub status: TraceStatus,
    /// The optimizer gave up on a non-finite value; the trace is partial.
    pub aborted: bool,
    pub iterations: usize,
    /// Recorded values are minibatch values for stochastic optimizers.
    pub final_value: Option<f64>,
    pub best_value: Option<f64>,
    pub returned: Vec<f64>,
    /// Exact (expected) objective at the returned point.
    pub returned_exact: Option<f64>,
    pub returned_excess: Option<f64>,
    /// First 1-based iteration within `target` of the optimum value.
    pub first_hit: Option<usize>,
    pub wall_time_s: f64,
}

pub struct RunOutput {
    pub summary: Summary,
    pub summary_path: PathBuf,
}

impl RunOutput {
    pub fn any_aborted(&self) -> bool {
        self.summary.runs.iter().any(|r| r.aborted)
    }
}

pub fn cmd_run(config_path: &Path, overrides: &Overrides) -> anyhow::Result<RunOutput> {
    let mut cfg = ExperimentConfig::load(config_path)?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = overrides.trials {
        cfg.trials = trials;
    }
    if let Some(dir) = &overrides.out_dir {
        cfg.out_dir = dir.clone();
    }
    cfg.validate()?;
    run_experiment(cfg)
}

pub fn run_experiment(cfg: ExperimentConfig) -> anyhow::Result<RunOutput> {
    let started = Instant::now();
    let root = seeded_stream(cfg.seed);
    let problem = problem::build(&cfg.problem, &mut root.substream(0))?;
    check_compatible(&cfg.optimizer, &problem)?;

    fs::create_dir_all(&cfg.out_dir)
        .with_context(|| format!("creating output directory {}", cfg.out_dir.display()))?;
    if let Some(doc) = &problem.dataset {
        doc.save(cfg.out_dir.join("dataset.json"))
            .context("writing dataset.json")?;
    }

    let batches = cfg.batch_sizes();
    let jobs: Vec<(u64, Option<usize>)> = (0..cfg.trials)
        .flat_map(|t| batches.iter().map(move |&b| (t, b)))
        .collect();
    let swept = !cfg.sweep.b.is_empty();
    let runs = jobs
        .par_iter()
        .map(|&(trial, b)| {
            let trial_stream = root.substream(1 + trial);
            run_one(&cfg, &problem, trial, b, swept, &trial_stream)
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let summary = Summary {
        schema_version: SUMMARY_SCHEMA_VERSION,
        optimum_value: problem.optimum_value,
        runs,
        wall_time_s: started.elapsed().as_secs_f64(),
        config: cfg,
    };
    let dir = &summary.config.out_dir;
    let summary_path = dir.join("summary.json");
    let file = fs::File::create(&summary_path).context("creating summary.json")?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &summary)
        .context("writing summary.json")?;
    fs::write(dir.join("summary.csv"), summary_csv(&summary.runs))
        .context("writing summary.csv")?;
    Ok(RunOutput {
        summary,
        summary_path,
    })
}

/// Rejects optimizer/problem pairings that cannot run, before any output.
fn check_compatible(opt: &OptimizerSpec, problem: &Problem) -> anyhow::Result<()> {
    let dim = problem.dim();
    if let StartSpec::Coords(c) = &opt.x1 {
        if c.len() != dim {
            return Err(usage(format!(
                "x1 has {} coordinates but the problem has dimension {dim}",
                c.len()
            )));
        }
        Point::new(c.clone()).map_err(setup)?;
    }
    if opt.oracle && !problem.has_oracle() {
        return Err(usage(
            "oracle = true but the problem has no direction oracle",
        ));
    }
    if opt.project && problem.exact().domain().is_none() {
        return Err(usage("project = true but the problem has no domain"));
    }
    if opt.name.is_normalized() {
        let eta = opt.eta.expect("validated");
        ngd_config(opt, problem, Point::zeros(dim), eta)
            .validate(dim)
            .map_err(setup)?;
    } else {
        schedule(opt).validate().map_err(setup)?;
    }
    Ok(())
}

fn schedule(opt: &OptimizerSpec) -> StepSchedule {
    let base = match (opt.eta, opt.eta0, opt.gamma) {
        (Some(eta), _, _) => StepSchedule::constant(eta),
        (None, Some(eta0), Some(gamma)) => {
            let mut s = StepSchedule::polynomial(eta0, gamma);
            if let (Some(e), slqc::optimizers::StepKind::Polynomial { exponent, .. }) =
                (opt.exponent, &mut s.kind)
            {
                *exponent = e;
            }
            s
        }
        _ => unreachable!("validated"),
    };
    let default_momentum = if opt.name == OptimizerName::Nesterov {
        0.95
    } else {
        0.0
    };
    base.with_momentum(opt.momentum.unwrap_or(default_momentum))
}

fn ngd_config(opt: &OptimizerSpec, problem: &Problem, x1: Point, eta: f64) -> NgdConfig {
    let mut cfg = NgdConfig::new(opt.iterations, eta, x1);
    if let Some(tol) = opt.grad_tol {
        cfg = cfg.with_grad_tol(tol);
    }
    if opt.project {
        if let Some(r) = problem.exact().domain() {
            cfg = cfg.with_region(r.clone());
        }
    }
    cfg
}

fn start_point(spec: &StartSpec, problem: &Problem, stream: &mut Stream) -> Point {
    match spec {
        StartSpec::Coords(c) => Point::new(c.clone()).expect("validated"),
        StartSpec::Rule(StartRule::Origin) => Point::zeros(problem.dim()),
        StartSpec::Rule(StartRule::Random) => sample_in(&problem.sample_region, stream),
    }
}

fn execute(
    opt: &OptimizerSpec,
    problem: &Problem,
    b: Option<usize>,
    x1: Point,
    stream: &mut Stream,
) -> slqc::Result<OptTrace> {
    match opt.name {
        OptimizerName::Ngd => {
            let cfg = ngd_config(opt, problem, x1, opt.eta.expect("validated"));
            if opt.oracle {
                ngd_with_oracle(problem.exact(), &cfg)
            } else {
                ngd(problem.exact(), &cfg)
            }
        }
        OptimizerName::Gd => gd(problem.exact(), &schedule(opt), opt.iterations, &x1),
        _ => match &problem.model {
            Model::Deterministic(f) => {
                stochastic(&Degenerate::new(f.clone()), opt, problem, b, x1, stream)
            }
            Model::NoisyGlm(d) => stochastic(d, opt, problem, b, x1, stream),
            Model::LowerBound(d) => stochastic(d, opt, problem, b, x1, stream),
        },
    }
}

fn stochastic<D: StochasticObjective>(
    dist: &D,
    opt: &OptimizerSpec,
    problem: &Problem,
    b: Option<usize>,
    x1: Point,
    stream: &mut Stream,
) -> slqc::Result<OptTrace> {
    let b = b.unwrap_or(1);
    let t = opt.iterations;
    match opt.name {
        OptimizerName::Sngd => {
            let cfg = ngd_config(opt, problem, x1, opt.eta.expect("validated"));
            sngd(dist, &SngdConfig::new(cfg, b), stream)
        }
        OptimizerName::Sgd => sgd(dist, &schedule(opt), t, &x1, stream),
        OptimizerName::Msgd => msgd(dist, &schedule(opt), t, &x1, b, stream),
        OptimizerName::Nesterov => nesterov(dist, &schedule(opt), t, &x1, b, stream),
        OptimizerName::Ngd | OptimizerName::Gd => {
            unreachable!("deterministic optimizers run directly")
        }
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn run_one(
    cfg: &ExperimentConfig,
    problem: &Problem,
    trial: u64,
    b: Option<usize>,
    swept: bool,
    trial_stream: &Stream,
) -> anyhow::Result<RunRecord> {
    let started = Instant::now();
    let x1 = start_point(&cfg.optimizer.x1, problem, &mut trial_stream.substream(0));
    let mut stream = trial_stream.substream(1);
    let (trace, aborted) = match execute(&cfg.optimizer, problem, b, x1, &mut stream) {
        Ok(t) => (t, false),
        Err(Error::Aborted { trace, .. }) => (*trace, true),
        Err(e) => return Err(setup(e)),
    };
    let wall_time_s = started.elapsed().as_secs_f64();

    let stem = match (swept, b) {
        (true, Some(b)) => format!("trace-trial{trial:03}-b{b}"),
        _ => format!("trace-trial{trial:03}"),
    };
    let csv_name = format!("{stem}.csv");
    let mut out = std::io::BufWriter::new(fs::File::create(cfg.out_dir.join(&csv_name))?);
    trace.write_csv(&mut out)?;
    out.flush()?;
    let trace_json = if cfg.json_traces {
        let name = format!("{stem}.json");
        let mut out = std::io::BufWriter::new(fs::File::create(cfg.out_dir.join(&name))?);
        trace.write_json(&mut out)?;
        out.flush()?;
        Some(name)
    } else {
        None
    };

    let exact = problem.exact();
    let returned_exact = if trace.is_empty() {
        None
    } else {
        finite(exact.value(&trace.returned))
    };
    let returned_excess = match (returned_exact, problem.optimum_value) {
        (Some(v), Some(opt)) => Some(v - opt),
        _ => None,
    };
    let first_hit = cfg
        .target
        .and_then(|t| trace.first_hit(problem.optimum_value.unwrap_or(0.0) + t));
    Ok(RunRecord {
        trial,
        b,
        trace_csv: csv_name,
        trace_json,
        status: trace.status.clone(),
        aborted,
        iterations: trace.len(),
        final_value: trace.final_value().and_then(finite),
        best_value: trace.best_value().and_then(finite),
        returned: trace.returned.coords().to_vec(),
        returned_exact,
        returned_excess,
        first_hit,
        wall_time_s,
    })
}

/// One row per run, without timings, so equal seeds give equal bytes.
pub fn summary_csv(runs: &[RunRecord]) -> String {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut s = String::from("trial,b,status,iterations,final_value,best_value,returned_exact,returned_excess,first_hit\n");
    for r in runs {
        let status = match (&r.status, r.aborted) {
            (_, true) => "aborted",
            (TraceStatus::Completed, _) => "completed",
            (TraceStatus::VanishingGradient { .. }, _) => "vanishing_gradient",
            (TraceStatus::NonFinite { .. }, _) => "non_finite",
        };
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.trial,
            r.b.map(|b| b.to_string()).unwrap_or_default(),
            status,
            r.iterations,
            opt(r.final_value),
            opt(r.best_value),
            opt(r.returned_exact),
            opt(r.returned_excess),
            r.first_hit.map(|t| t.to_string()).unwrap_or_default(),
        ));
    }
    s
}
