//! `lowerbound` and `budgets`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use slqc::analysis::{
    glm_sample_bound, lower_bound_experiment, ngd_budget, ngd_smooth_budget, sngd_budget, Budget,
    LowerBoundReport,
};
use slqc::seeded_stream;

use crate::error::{setup, usage};

pub fn cmd_lowerbound(
    eps: f64,
    trials: u64,
    iterations: u64,
    seed: u64,
    out_dir: &Path,
) -> anyhow::Result<(LowerBoundReport, PathBuf)> {
    if trials == 0 {
        return Err(usage("trials must be ≥ 1"));
    }
    if iterations == 0 {
        return Err(usage("iterations must be ≥ 1"));
    }
    if !(eps > 0.0 && eps <= 0.1) {
        return Err(usage(format!("eps must lie in (0, 0.1], got {eps}")));
    }
    let report =
        lower_bound_experiment(eps, trials, iterations, &seeded_stream(seed)).map_err(setup)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let path = out_dir.join("lowerbound.json");
    fs::write(&path, report.to_json()?).with_context(|| format!("writing {}", path.display()))?;
    Ok((report, path))
}

#[derive(Clone, Debug, Default)]
pub struct BudgetArgs {
    pub eps: f64,
    pub kappa: Option<f64>,
    pub beta: Option<f64>,
    pub dist0: f64,
    pub delta: Option<f64>,
    pub m_bound: f64,
    pub w_radius: Option<f64>,
}

/// Every budget computable from the given inputs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetTable {
    pub eps: f64,
    pub dist0: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ngd: Option<Budget>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ngd_smooth: Option<Budget>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sngd: Option<Budget>,
    /// Samples for uniform convergence of the GLM empirical error.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub glm_samples: Option<u64>,
}

pub fn cmd_budgets(args: &BudgetArgs) -> anyhow::Result<BudgetTable> {
    let mut table = BudgetTable {
        eps: args.eps,
        dist0: args.dist0,
        ..Default::default()
    };
    if let Some(kappa) = args.kappa {
        table.ngd = Some(ngd_budget(args.eps, kappa, args.dist0).map_err(setup)?);
        if let Some(delta) = args.delta {
            table.sngd =
                Some(sngd_budget(args.eps, kappa, args.dist0, delta, args.m_bound).map_err(setup)?);
        }
    }
    if let Some(beta) = args.beta {
        table.ngd_smooth = Some(ngd_smooth_budget(args.eps, beta, args.dist0).map_err(setup)?);
    }
    if let (Some(delta), Some(w)) = (args.delta, args.w_radius) {
        table.glm_samples = Some(glm_sample_bound(args.eps, delta, w).map_err(setup)?);
    }
    if table
        == (BudgetTable {
            eps: args.eps,
            dist0: args.dist0,
            ..Default::default()
        })
    {
        return Err(usage("give --kappa, --beta, or --delta with --w-radius"));
    }
    Ok(table)
}
