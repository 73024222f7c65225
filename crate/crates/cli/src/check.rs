//! `check`: property checkers over sampled points of a named problem.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::Context;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use slqc::properties::{
    check_local_lipschitz, check_local_smooth, check_slqc_batch, check_sublevel_convex, sample_in,
    search_quasiconvex_violation, LocalCheck, LocalReport, SlqcBatch, SlqcQuery, SublevelCheck,
    SublevelReport,
};
use slqc::{seeded_stream, FeasibleRegion, Point};

use crate::config::ProblemSpec;
use crate::error::{setup, usage};
use crate::problem::{self, Problem};

pub const CHECK_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemName {
    G,
    Cliff,
    Cone,
    Quadratic,
    IdealizedGlm,
    Counterexample,
    Perceptron,
    NoisyGlm,
    LowerBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    /// Strict local quasi-convexity at sampled points.
    Slqc,
    /// Gradient form of quasi-convexity on sampled pairs.
    Quasiconvex,
    /// Convexity of one sublevel set.
    Sublevel,
    /// Local Lipschitz bound around the optimum.
    Lipschitz,
    /// Local smoothness bound around the optimum.
    Smooth,
}

/// Sublevel threshold: chosen from the problem, or given explicitly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Alpha {
    Auto,
    Value(f64),
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Self::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Self::Value(v)),
            _ => Err(format!("expected `auto` or a finite number, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckArgs {
    pub problem: ProblemName,
    pub property: Property,
    pub eps_grid: Vec<f64>,
    pub kappa: Option<f64>,
    pub alpha: Alpha,
    pub radius: f64,
    pub constant: Option<f64>,
    pub dim: Option<usize>,
    pub trials: Option<u64>,
    pub seed: u64,
    pub out_dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub schema_version: u32,
    pub problem: ProblemSpec,
    pub seed: u64,
    pub holds: bool,
    pub details: CheckDetails,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "snake_case")]
pub enum CheckDetails {
    Slqc {
        eps_grid: Vec<f64>,
        kappa: f64,
        batch: SlqcBatch,
    },
    Quasiconvex {
        region: FeasibleRegion,
        trials: usize,
        counterexample: Option<(Point, Point)>,
    },
    Sublevel {
        check: SublevelCheck,
        report: SublevelReport,
    },
    Lipschitz {
        check: LocalCheck,
        report: LocalReport,
    },
    Smooth {
        check: LocalCheck,
        report: LocalReport,
    },
}

/// Problem parameters used when a problem is named on the command line.
pub fn default_spec(name: ProblemName, dim: Option<usize>) -> ProblemSpec {
    match name {
        ProblemName::G => ProblemSpec::G {},
        ProblemName::Cliff => ProblemSpec::Cliff {
            valley_width: 0.5,
            cliff_height: 10.0,
            plateau_slope: 1e-6,
        },
        ProblemName::Cone => ProblemSpec::Cone {
            center: vec![0.0; dim.unwrap_or(2)],
        },
        ProblemName::Quadratic => ProblemSpec::Quadratic {
            center: vec![0.0; dim.unwrap_or(2)],
        },
        ProblemName::IdealizedGlm => ProblemSpec::IdealizedGlm {
            dim: dim.unwrap_or(3),
            samples: 100,
            w_radius: 2.0,
        },
        ProblemName::Counterexample => ProblemSpec::Counterexample {},
        ProblemName::Perceptron => ProblemSpec::Perceptron {
            dim: dim.unwrap_or(5),
            samples: 200,
            gamma: 0.2,
        },
        ProblemName::NoisyGlm => ProblemSpec::NoisyGlm {
            dim: dim.unwrap_or(5),
            w_radius: 2.0,
            noise_level: 1.0,
            pool_size: 4096,
        },
        ProblemName::LowerBound => ProblemSpec::LowerBound { eps: 0.1 },
    }
}

fn optimum(problem: &Problem) -> anyhow::Result<Point> {
    problem
        .optimum
        .clone()
        .ok_or_else(|| usage("this problem has no known minimizer to check against"))
}

fn to_usize(n: u64) -> anyhow::Result<usize> {
    usize::try_from(n).map_err(|_| usage(format!("trials {n} is too large")))
}

pub fn cmd_check(args: &CheckArgs) -> anyhow::Result<(CheckReport, PathBuf)> {
    if args.trials == Some(0) {
        return Err(usage("trials must be ≥ 1"));
    }
    let spec = default_spec(args.problem, args.dim);
    let root = seeded_stream(args.seed);
    let problem = problem::build(&spec, &mut root.substream(0))?;
    let f = problem.exact();
    let mut stream = root.substream(1);

    let details = match args.property {
        Property::Slqc => {
            if args.eps_grid.is_empty()
                || args.eps_grid.iter().any(|e| !(e.is_finite() && *e > 0.0))
            {
                return Err(usage("--eps-grid needs positive values"));
            }
            let kappa = args.kappa.unwrap_or(problem.kappa);
            let z = optimum(&problem)?;
            let points: Vec<Point> = (0..args.trials.unwrap_or(100))
                .map(|_| sample_in(&problem.sample_region, &mut stream))
                .collect();
            let oracle = problem.has_oracle();
            let mut queries = Vec::with_capacity(args.eps_grid.len() * points.len());
            for &eps in &args.eps_grid {
                for x in &points {
                    let q = SlqcQuery::new(eps, kappa, z.clone(), x.clone());
                    queries.push(if oracle { q.with_oracle() } else { q });
                }
            }
            let batch = check_slqc_batch(f, queries).map_err(setup)?;
            CheckDetails::Slqc {
                eps_grid: args.eps_grid.clone(),
                kappa,
                batch,
            }
        }
        Property::Quasiconvex => {
            let trials = to_usize(args.trials.unwrap_or(10_000))?;
            let region = problem.sample_region.clone();
            let counterexample =
                search_quasiconvex_violation(f, &region, trials, &mut stream).map_err(setup)?;
            CheckDetails::Quasiconvex {
                region,
                trials,
                counterexample,
            }
        }
        Property::Sublevel => {
            let alpha = match args.alpha {
                Alpha::Value(v) => v,
                Alpha::Auto if !problem.witnesses.is_empty() => problem
                    .witnesses
                    .iter()
                    .flat_map(|(a, b)| [f.value(a), f.value(b)])
                    .fold(f64::NEG_INFINITY, f64::max),
                Alpha::Auto => {
                    // Median level over the sampling region.
                    let mut levels: Vec<f64> = (0..101)
                        .map(|_| f.value(&sample_in(&problem.sample_region, &mut stream)))
                        .collect();
                    levels.sort_by(f64::total_cmp);
                    levels[50]
                }
            };
            let check = SublevelCheck {
                alpha,
                region: problem.sample_region.clone(),
                trials: to_usize(args.trials.unwrap_or(10_000))?,
                seed_pairs: problem.witnesses.clone(),
            };
            let report = check_sublevel_convex(f, &check, &mut stream).map_err(setup)?;
            CheckDetails::Sublevel { check, report }
        }
        Property::Lipschitz | Property::Smooth => {
            let constant = match (args.property, args.constant) {
                (_, Some(c)) => c,
                (Property::Lipschitz, None) => args.kappa.unwrap_or(problem.kappa),
                _ => return Err(usage("smooth needs --constant (the smoothness β)")),
            };
            let check = LocalCheck {
                center: optimum(&problem)?,
                radius: args.radius,
                constant,
                trials: to_usize(args.trials.unwrap_or(10_000))?,
            };
            if args.property == Property::Lipschitz {
                let report = check_local_lipschitz(f, &check, &mut stream).map_err(setup)?;
                CheckDetails::Lipschitz { check, report }
            } else {
                let report = check_local_smooth(f, &check, &mut stream).map_err(setup)?;
                CheckDetails::Smooth { check, report }
            }
        }
    };

    let holds = match &details {
        CheckDetails::Slqc { batch, .. } => batch.all_hold(),
        CheckDetails::Quasiconvex { counterexample, .. } => counterexample.is_none(),
        CheckDetails::Sublevel { report, .. } => report.convex,
        CheckDetails::Lipschitz { report, .. } | CheckDetails::Smooth { report, .. } => {
            report.holds
        }
    };
    let report = CheckReport {
        schema_version: CHECK_SCHEMA_VERSION,
        problem: spec,
        seed: args.seed,
        holds,
        details,
    };
    let path = write_report(&report, &args.out_dir, args.problem, args.property)?;
    Ok((report, path))
}

fn write_report(
    report: &CheckReport,
    dir: &Path,
    problem: ProblemName,
    property: Property,
) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = |v: &dyn ValueEnumName| v.name();
    let path = dir.join(format!("check-{}-{}.json", name(&problem), name(&property)));
    let text = serde_json::to_string_pretty(report)?;
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Command-line spelling of a value enum.
pub trait ValueEnumName {
    fn name(&self) -> String;
}

impl<T: ValueEnum> ValueEnumName for T {
    fn name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

/// One-line human summary of a report.
pub fn describe(report: &CheckReport) -> String {
    let verdict = if report.holds { "holds" } else { "violated" };
    let detail = match &report.details {
        CheckDetails::Slqc { batch, kappa, .. } => {
            format!(
                "{} passed, {} failed (kappa {kappa})",
                batch.passed, batch.failed
            )
        }
        CheckDetails::Quasiconvex {
            trials,
            counterexample,
            ..
        } => match counterexample {
            Some((x, y)) => format!("pair x={x:?} y={y:?}"),
            None => format!("no violation in {trials} pairs"),
        },
        CheckDetails::Sublevel { report, .. } => match &report.counterexample {
            Some(v) => format!(
                "alpha={} x={:?} y={:?} point={:?} value={}",
                v.alpha, v.x, v.y, v.point, v.value
            ),
            None => format!(
                "alpha={} with {} pairs tested",
                report.alpha, report.pairs_tested
            ),
        },
        CheckDetails::Lipschitz { report, .. } | CheckDetails::Smooth { report, .. } => {
            format!(
                "worst ratio {:.6} over {} pairs",
                report.worst_ratio, report.trials
            )
        }
    };
    format!("{verdict}: {detail}")
}
