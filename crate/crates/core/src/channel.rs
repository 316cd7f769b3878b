//! Row-stochastic channel matrices.

use crate::error::{QifError, Result};
use crate::labels::check_unique;

/// Tolerance on channel row sums.
pub const ROW_SUM_TOL: f64 = 1e-9;
/// Rows off by at most this much are renormalized by [`Channel::normalized`].
pub const RENORMALIZE_TOL: f64 = 1e-6;

/// A labeled channel `C[x, y] = p(y | x)`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    inputs: Vec<String>,
    outputs: Vec<String>,
    data: Vec<f64>,
}

impl Channel {
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let data = flatten_rows(&inputs, &outputs, rows)?;
        Self::from_flat(inputs, outputs, data)
    }

    /// Builds from a row-major buffer and validates every invariant.
    pub fn from_flat(inputs: Vec<String>, outputs: Vec<String>, data: Vec<f64>) -> Result<Self> {
        let c = Self::check_shape(inputs, outputs, data)?;
        c.check_entries()?;
        for (x, row) in c.rows().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(QifError::RowNotStochastic {
                    row: c.inputs[x].clone(),
                    sum,
                });
            }
        }
        Ok(c)
    }

    /// Like [`Channel::new`] but renormalizes rows whose sum is off by at
    /// most [`RENORMALIZE_TOL`], logging a warning. Used when loading
    /// hand-written files with truncated decimals.
    pub fn normalized(
        inputs: Vec<String>,
        outputs: Vec<String>,
        rows: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let data = flatten_rows(&inputs, &outputs, rows)?;
        let mut c = Self::check_shape(inputs, outputs, data)?;
        c.check_entries()?;
        let ny = c.outputs.len();
        for x in 0..c.inputs.len() {
            let row = &mut c.data[x * ny..(x + 1) * ny];
            let sum: f64 = row.iter().sum();
            let off = (sum - 1.0).abs();
            if off > RENORMALIZE_TOL {
                return Err(QifError::RowNotStochastic {
                    row: c.inputs[x].clone(),
                    sum,
                });
            }
            if off > ROW_SUM_TOL {
                log::warn!("renormalizing row `{}` (sum {sum})", c.inputs[x]);
                row.iter_mut().for_each(|v| *v /= sum);
            }
        }
        Ok(c)
    }

    /// For composition results whose rows are stochastic by construction.
    /// Clamps rounding overshoot above one.
    pub(crate) fn from_parts_unchecked(
        inputs: Vec<String>,
        outputs: Vec<String>,
        mut data: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(data.len(), inputs.len() * outputs.len());
        for v in &mut data {
            if *v > 1.0 {
                *v = 1.0;
            }
        }
        let c = Channel {
            inputs,
            outputs,
            data,
        };
        debug_assert!(c
            .rows()
            .all(|r| (r.iter().sum::<f64>() - 1.0).abs() <= 1e-6));
        c
    }

    fn check_shape(inputs: Vec<String>, outputs: Vec<String>, data: Vec<f64>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(QifError::EmptySecretSpace);
        }
        if outputs.is_empty() {
            return Err(QifError::DimensionMismatch("channel has no outputs".into()));
        }
        check_unique(&inputs)?;
        check_unique(&outputs)?;
        if data.len() != inputs.len() * outputs.len() {
            return Err(QifError::LengthMismatch {
                what: "channel entries",
                expected: inputs.len() * outputs.len(),
                got: data.len(),
            });
        }
        Ok(Channel {
            inputs,
            outputs,
            data,
        })
    }

    fn check_entries(&self) -> Result<()> {
        let ny = self.outputs.len();
        for (i, &v) in self.data.iter().enumerate() {
            if !v.is_finite() {
                return Err(QifError::NonFinite {
                    what: "channel entry",
                    value: v,
                });
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(QifError::EntryOutOfRange {
                    what: "channel",
                    row: self.inputs[i / ny].clone(),
                    col: self.outputs[i % ny].clone(),
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// The `n × n` identity channel over `labels`.
    pub fn identity(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::from_flat(labels.clone(), labels, data)
    }

    /// Every row equal to `row` (a noninterfering channel).
    pub fn constant(inputs: Vec<String>, outputs: Vec<String>, row: &[f64]) -> Result<Self> {
        let rows = vec![row.to_vec(); inputs.len()];
        Self::new(inputs, outputs, rows)
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.outputs.len()
    }

    /// Row-major entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[x * self.outputs.len() + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let ny = self.outputs.len();
        &self.data[x * ny..(x + 1) * ny]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks(self.outputs.len())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    /// Largest deviation of a row sum from one.
    pub fn max_row_deviation(&self) -> f64 {
        self.rows()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Same matrix with new labels.
    pub fn relabeled(&self, inputs: Vec<String>, outputs: Vec<String>) -> Result<Self> {
        Self::check_shape(inputs, outputs, self.data.clone())
    }

    /// Largest absolute entrywise difference; `None` if shapes differ.
    pub fn max_abs_diff(&self, other: &Channel) -> Option<f64> {
        if self.n_inputs() != other.n_inputs() || self.n_outputs() != other.n_outputs() {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

fn flatten_rows(inputs: &[String], outputs: &[String], rows: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    if rows.len() != inputs.len() {
        return Err(QifError::LengthMismatch {
            what: "channel rows",
            expected: inputs.len(),
            got: rows.len(),
        });
    }
    let mut data = Vec::with_capacity(inputs.len() * outputs.len());
    for r in rows {
        if r.len() != outputs.len() {
            return Err(QifError::LengthMismatch {
                what: "channel row",
                expected: outputs.len(),
                got: r.len(),
            });
        }
        data.extend(r);
    }
    Ok(data)
}
