//! Turns a [`ProblemSpec`] into runnable objectives.

use std::sync::Arc;

use anyhow::Context;
use slqc::problems::dataset::{DatasetDocument, DatasetKind};
use slqc::problems::{
    make_cliff_plateau, make_g, make_idealized_glm, make_lower_bound_distribution, make_noisy_glm,
    make_nonqc_counterexample, make_perceptron, simple, GlmDataset, LowerBoundDistribution,
    NoisyGlm, NoisyGlmConfig, PerceptronDataset, SigmoidSum, LOWER_BOUND_OPTIMUM,
};
use slqc::{FeasibleRegion, Objective, Point, StochasticObjective, Stream};

use crate::config::ProblemSpec;
use crate::error::{setup, usage};

/// A built problem. Deterministic objectives are shared behind `Arc` so they
/// can double as zero-variance distributions for the stochastic optimizers.
pub enum Model {
    Deterministic(Arc<dyn Objective>),
    NoisyGlm(NoisyGlm),
    LowerBound(LowerBoundDistribution),
}

pub struct Problem {
    pub model: Model,
    /// Known minimizer, used as `z` by the property checks.
    pub optimum: Option<Point>,
    /// Value of the exact objective at `optimum`.
    pub optimum_value: Option<f64>,
    /// Region random points are drawn from.
    pub sample_region: FeasibleRegion,
    /// SLQC constant the problem is known to satisfy.
    pub kappa: f64,
    /// Pairs whose midpoint is known to break sublevel convexity.
    pub witnesses: Vec<(Point, Point)>,
    /// Generated dataset worth saving alongside the results.
    pub dataset: Option<DatasetDocument>,
}

impl Problem {
    pub fn dim(&self) -> usize {
        match &self.model {
            Model::Deterministic(f) => f.dim(),
            Model::NoisyGlm(d) => d.dim(),
            Model::LowerBound(d) => d.dim(),
        }
    }

    /// The exact objective: the function itself, or the expectation of a
    /// distribution.
    pub fn exact(&self) -> &dyn Objective {
        match &self.model {
            Model::Deterministic(f) => f.as_ref(),
            Model::NoisyGlm(d) => d.expected().expect("noisy GLM has a closed-form mean"),
            Model::LowerBound(d) => d.expected().expect("lower-bound mean is closed form"),
        }
    }

    pub fn has_oracle(&self) -> bool {
        self.exact().has_direction_oracle()
    }
}

fn pt(coords: Vec<f64>) -> anyhow::Result<Point> {
    Point::new(coords).map_err(setup)
}

fn ball(center: Point, radius: f64) -> anyhow::Result<FeasibleRegion> {
    FeasibleRegion::ball(center, radius).map_err(setup)
}

fn deterministic(f: impl Objective + 'static) -> Model {
    Model::Deterministic(Arc::new(f))
}

pub fn build(spec: &ProblemSpec, stream: &mut Stream) -> anyhow::Result<Problem> {
    let problem = match spec {
        ProblemSpec::G {} => {
            let g = make_g();
            let region = g.domain().cloned().expect("g lives on a box");
            Problem {
                model: deterministic(g),
                optimum: Some(SigmoidSum::minimizer()),
                optimum_value: Some(SigmoidSum::min_value()),
                sample_region: region,
                kappa: 1.0,
                witnesses: vec![],
                dataset: None,
            }
        }
        ProblemSpec::Cliff {
            valley_width,
            cliff_height,
            plateau_slope,
        } => {
            let f =
                make_cliff_plateau(*valley_width, *cliff_height, *plateau_slope).map_err(setup)?;
            let reach = 2.0 * f.plateau_start().max(6.0);
            Problem {
                kappa: f.valley_slope,
                model: deterministic(f),
                optimum: Some(Point::zeros(1)),
                optimum_value: Some(0.0),
                sample_region: FeasibleRegion::cube(1, -reach, reach).map_err(setup)?,
                witnesses: vec![],
                dataset: None,
            }
        }
        ProblemSpec::Quadratic { center } | ProblemSpec::Cone { center } => {
            let c = pt(center.clone())?;
            let region = ball(c.clone(), 5.0)?;
            let model = if matches!(spec, ProblemSpec::Cone { .. }) {
                deterministic(simple::Cone::new(c.clone()))
            } else {
                deterministic(simple::Quadratic::new(c.clone()))
            };
            Problem {
                model,
                optimum: Some(c),
                optimum_value: Some(0.0),
                sample_region: region,
                kappa: 1.0,
                witnesses: vec![],
                dataset: None,
            }
        }
        ProblemSpec::IdealizedGlm {
            dim,
            samples,
            w_radius,
        } => {
            let (data, f) = make_idealized_glm(stream, *dim, *samples, *w_radius).map_err(setup)?;
            glm_problem(&data, f.domain().cloned(), Arc::new(f))?
        }
        ProblemSpec::Counterexample {} => {
            let (data, f) = make_nonqc_counterexample();
            let (w1, w2) = slqc::problems::counterexample_witnesses();
            let mut p = glm_problem(&data, None, Arc::new(f))?;
            p.sample_region = FeasibleRegion::cube(2, 0.0, 4.0).map_err(setup)?;
            p.witnesses = vec![(w1, w2)];
            p
        }
        ProblemSpec::Perceptron {
            dim,
            samples,
            gamma,
        } => {
            let (data, f) = make_perceptron(stream, *dim, *samples, *gamma).map_err(setup)?;
            perceptron_problem(&data, Arc::new(f))?
        }
        ProblemSpec::NoisyGlm {
            dim,
            w_radius,
            noise_level,
            pool_size,
        } => {
            let config = NoisyGlmConfig {
                dim: *dim,
                w_radius: *w_radius,
                noise_level: *noise_level,
                pool_size: *pool_size,
            };
            let dist = make_noisy_glm(stream, config).map_err(setup)?;
            let w = dist.planted().clone();
            let value = dist.expected_error().value(&w);
            Problem {
                sample_region: ball(Point::zeros(*dim), *w_radius)?,
                kappa: w_radius.exp(),
                model: Model::NoisyGlm(dist),
                optimum: Some(w),
                optimum_value: Some(value),
                witnesses: vec![],
                dataset: None,
            }
        }
        ProblemSpec::LowerBound { eps } => {
            let dist = make_lower_bound_distribution(*eps).map_err(setup)?;
            let min = dist.expectation().min_value();
            Problem {
                model: Model::LowerBound(dist),
                optimum: Some(pt(vec![LOWER_BOUND_OPTIMUM])?),
                optimum_value: Some(min),
                sample_region: FeasibleRegion::cube(1, -10.0, 10.0).map_err(setup)?,
                kappa: 1.0,
                witnesses: vec![],
                dataset: None,
            }
        }
        ProblemSpec::Dataset { path } => {
            let doc = DatasetDocument::load(path)
                .with_context(|| format!("loading dataset {}", path.display()))
                .map_err(|e| usage(format!("{e:#}")))?;
            match doc.kind {
                DatasetKind::Glm => {
                    let data = GlmDataset::try_from(doc).map_err(setup)?;
                    let f = data.objective();
                    glm_problem(&data, None, Arc::new(f))?
                }
                DatasetKind::Perceptron => {
                    let data = PerceptronDataset::try_from(doc).map_err(setup)?;
                    let f = data.objective();
                    perceptron_problem(&data, Arc::new(f))?
                }
            }
        }
    };
    Ok(problem)
}

fn glm_problem(
    data: &GlmDataset,
    domain: Option<FeasibleRegion>,
    f: Arc<dyn Objective>,
) -> anyhow::Result<Problem> {
    let d = data.dim();
    let optimum_value = data.planted.as_ref().map(|w| f.value(w));
    let sample_region = match domain {
        Some(r) => r,
        None => ball(Point::zeros(d), data.w_radius)?,
    };
    Ok(Problem {
        model: Model::Deterministic(f),
        optimum: data.planted.clone(),
        optimum_value,
        sample_region,
        kappa: data.w_radius.exp(),
        witnesses: vec![],
        dataset: Some(DatasetDocument::from(data)),
    })
}

fn perceptron_problem(data: &PerceptronDataset, f: Arc<dyn Objective>) -> anyhow::Result<Problem> {
    let d = data.dim();
    Ok(Problem {
        optimum_value: Some(f.value(&data.planted)),
        model: Model::Deterministic(f),
        optimum: Some(data.planted.clone()),
        sample_region: ball(Point::zeros(d), 2.0)?,
        kappa: 2.0 / data.gamma,
        witnesses: vec![],
        dataset: Some(DatasetDocument::from(data)),
    })
}
