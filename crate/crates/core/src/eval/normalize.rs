//! Column-wise min-max scaling.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// Per-column minimum and maximum learned from a set of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, EvalError> {
        let first = rows.first().ok_or(EvalError::EmptyInput)?.as_ref();
        let mut min = first.to_vec();
        let mut max = first.to_vec();
        for r in rows {
            let r = r.as_ref();
            if r.len() != min.len() {
                return Err(EvalError::RaggedRows);
            }
            for (j, &v) in r.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(Self { min, max })
    }

    /// `(x - min) / (max - min)`; columns that were constant map to 0.
    ///
    /// Values outside the fitted range land outside `[0, 1]`.
    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&x, (&lo, &hi))| if hi > lo { (x - lo) / (hi - lo) } else { 0.0 })
            .collect()
    }

    pub fn transform_all<R: AsRef<[f64]>>(&self, rows: &[R]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform(r.as_ref())).collect()
    }
}

/// Rows over which the scaler is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationScope {
    /// Each subject's rows are scaled independently.
    PerSubject,
    /// All rows share one scaler.
    Global,
}

/// Whether test rows take part in fitting the scaler.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// Fit on the training rows of each split only.
    #[default]
    SplitRespecting,
    /// Fit on every row of the scope, training and test alike.
    WholeScope,
}

/// Scales whole columns, optionally per group. `subjects` gives each row's group.
pub fn minmax_normalize<R: AsRef<[f64]>>(
    rows: &[R],
    scope: NormalizationScope,
    subjects: &[u32],
) -> Result<Vec<Vec<f64>>, EvalError> {
    if rows.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    match scope {
        NormalizationScope::Global => Ok(MinMaxScaler::fit(rows)?.transform_all(rows)),
        NormalizationScope::PerSubject => {
            if subjects.len() != rows.len() {
                return Err(EvalError::LengthMismatch);
            }
            let mut out = vec![Vec::new(); rows.len()];
            let mut groups: Vec<u32> = subjects.to_vec();
            groups.sort_unstable();
            groups.dedup();
            for g in groups {
                let idx: Vec<usize> = (0..rows.len()).filter(|&i| subjects[i] == g).collect();
                let block: Vec<&[f64]> = idx.iter().map(|&i| rows[i].as_ref()).collect();
                let scaler = MinMaxScaler::fit(&block)?;
                for &i in &idx {
                    out[i] = scaler.transform(rows[i].as_ref());
                }
            }
            Ok(out)
        }
    }
}
