//! Versioned JSON export/import of generated datasets.
//!
//! ```json
//! { "schema_version": 1, "kind": "glm", "samples": [{"x": [..], "y": 0.3}],
//!   "planted": [..], "w_radius": 2.0, "gamma": null, "seed": 7 }
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::point::Point;

use super::glm::{GlmDataset, GlmSample};
use super::perceptron::PerceptronDataset;

pub const DATASET_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetKind {
    Glm,
    Perceptron,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetDocument {
    pub schema_version: u32,
    pub kind: DatasetKind,
    pub samples: Vec<GlmSample>,
    pub planted: Option<Point>,
    pub w_radius: Option<f64>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
}

impl DatasetDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.schema_version != DATASET_SCHEMA_VERSION {
            return Err(Error::SchemaVersion {
                expected: DATASET_SCHEMA_VERSION,
                found: doc.schema_version,
            });
        }
        Ok(doc)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

impl From<&GlmDataset> for DatasetDocument {
    fn from(d: &GlmDataset) -> Self {
        Self {
            schema_version: DATASET_SCHEMA_VERSION,
            kind: DatasetKind::Glm,
            samples: d.samples.clone(),
            planted: d.planted.clone(),
            w_radius: Some(d.w_radius),
            gamma: None,
            seed: d.seed,
        }
    }
}

impl From<&PerceptronDataset> for DatasetDocument {
    fn from(d: &PerceptronDataset) -> Self {
        Self {
            schema_version: DATASET_SCHEMA_VERSION,
            kind: DatasetKind::Perceptron,
            samples: d.samples.clone(),
            planted: Some(d.planted.clone()),
            w_radius: None,
            gamma: Some(d.gamma),
            seed: d.seed,
        }
    }
}

impl TryFrom<DatasetDocument> for GlmDataset {
    type Error = Error;

    fn try_from(doc: DatasetDocument) -> Result<Self> {
        if doc.kind != DatasetKind::Glm {
            return Err(invalid("kind", "expected a glm dataset"));
        }
        let data = GlmDataset {
            samples: doc.samples,
            w_radius: doc
                .w_radius
                .ok_or_else(|| invalid("w_radius", "missing for a glm dataset"))?,
            planted: doc.planted,
            seed: doc.seed,
        };
        data.validate()?;
        Ok(data)
    }
}

impl TryFrom<DatasetDocument> for PerceptronDataset {
    type Error = Error;

    fn try_from(doc: DatasetDocument) -> Result<Self> {
        if doc.kind != DatasetKind::Perceptron {
            return Err(invalid("kind", "expected a perceptron dataset"));
        }
        let data = PerceptronDataset {
            samples: doc.samples,
            gamma: doc
                .gamma
                .ok_or_else(|| invalid("gamma", "missing for a perceptron dataset"))?,
            planted: doc
                .planted
                .ok_or_else(|| invalid("planted", "missing for a perceptron dataset"))?,
            seed: doc.seed,
        };
        data.validate()?;
        Ok(data)
    }
}
