//! Per-iteration optimizer records and their CSV / JSON export.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::point::Point;

/// How a run ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceStatus {
    /// All requested iterations ran.
    Completed,
    /// Deterministic run stopped because the search direction vanished at
    /// the last recorded iterate.
    VanishingGradient { iteration: usize },
    /// A non-finite value or gradient appeared. Nothing from the offending
    /// iteration is recorded.
    NonFinite { iteration: usize, what: String },
}

/// The full record of one optimizer run.
///
/// `iterates`, `values`, `grad_norms` and `minibatch_ids` share one length.
/// `returned_index` is the first index minimizing `values`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptTrace {
    pub iterates: Vec<Point>,
    pub values: Vec<f64>,
    pub grad_norms: Vec<f64>,
    /// Stream word offset the minibatch was drawn at; `None` for exact runs.
    pub minibatch_ids: Vec<Option<u64>>,
    pub returned: Point,
    pub returned_index: usize,
    pub status: TraceStatus,
}

impl OptTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn returned_value(&self) -> Option<f64> {
        self.values.get(self.returned_index).copied()
    }

    pub fn best_value(&self) -> Option<f64> {
        self.returned_value()
    }

    pub fn final_value(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// First (1-based) iteration whose value is at most `target`.
    pub fn first_hit(&self, target: f64) -> Option<usize> {
        self.values.iter().position(|&v| v <= target).map(|i| i + 1)
    }

    /// Re-evaluates every iterate under `f`, e.g. the expected objective of a
    /// stochastic run. `returned` is left untouched.
    pub fn reevaluate<F: crate::Objective + ?Sized>(&self, f: &F) -> Vec<f64> {
        self.iterates.iter().map(|x| f.value(x)).collect()
    }

    pub fn is_aborted(&self) -> bool {
        matches!(self.status, TraceStatus::NonFinite { .. })
    }

    /// Long-format CSV: `t,value,grad_norm,x0,x1,…` with `t` starting at 1.
    /// Floats carry 17 significant digits, lines end in `\n`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let dim = self.returned.dim();
        write!(out, "t,value,grad_norm")?;
        for i in 0..dim {
            write!(out, ",x{i}")?;
        }
        out.write_all(b"\n")?;
        for (t, ((x, v), g)) in self
            .iterates
            .iter()
            .zip(&self.values)
            .zip(&self.grad_norms)
            .enumerate()
        {
            write!(out, "{},{},{}", t + 1, fmt_f64(*v), fmt_f64(*g))?;
            for c in x.coords() {
                write!(out, ",{}", fmt_f64(*c))?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Single-writer accumulator for an [`OptTrace`].
#[derive(Clone, Debug)]
pub(crate) struct TraceBuilder {
    iterates: Vec<Point>,
    values: Vec<f64>,
    grad_norms: Vec<f64>,
    minibatch_ids: Vec<Option<u64>>,
    best: Option<(usize, f64)>,
}

impl TraceBuilder {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            iterates: Vec::with_capacity(n),
            values: Vec::with_capacity(n),
            grad_norms: Vec::with_capacity(n),
            minibatch_ids: Vec::with_capacity(n),
            best: None,
        }
    }

    pub fn push(&mut self, x: Point, value: f64, grad_norm: f64, minibatch: Option<u64>) {
        let idx = self.values.len();
        // Strict comparison keeps the earliest index on ties.
        if self.best.is_none_or(|(_, b)| value < b) {
            self.best = Some((idx, value));
        }
        self.iterates.push(x);
        self.values.push(value);
        self.grad_norms.push(grad_norm);
        self.minibatch_ids.push(minibatch);
    }

    /// `fallback` is returned when nothing was recorded.
    pub fn finish(self, status: TraceStatus, fallback: &Point) -> OptTrace {
        let (returned_index, returned) = match self.best {
            Some((i, _)) => (i, self.iterates[i].clone()),
            None => (0, fallback.clone()),
        };
        OptTrace {
            iterates: self.iterates,
            values: self.values,
            grad_norms: self.grad_norms,
            minibatch_ids: self.minibatch_ids,
            returned,
            returned_index,
            status,
        }
    }
}
