//! Window-size and fusion-weight sweeps.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::exec::Executor;
use super::protocol::{collect_predictions, score, CvConfig, EvalModality, EvaluationReport, FeatureDataset, Protocol, Target};

/// Window sizes of the standard sweep, seconds.
pub const WINDOW_SIZES_S: [f64; 9] = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];

/// Number of intervals in the weight grid; the grid has one more point.
pub const ALPHA_STEPS: usize = 40;

/// `0, 0.025, ..., 1`.
pub fn alpha_grid() -> Vec<f64> {
    (0..=ALPHA_STEPS).map(|i| i as f64 / ALPHA_STEPS as f64).collect()
}

/// One row of the window sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowSpec {
    pub label: &'static str,
    /// `None` marks the majority-class baseline.
    pub modality: Option<EvalModality>,
    pub alpha: f64,
}

pub const WINDOW_SWEEP_ROWS: [RowSpec; 5] = [
    RowSpec { label: "DLF_EEG", modality: Some(EvalModality::Dlf), alpha: 0.55 },
    RowSpec { label: "DLF_MF", modality: Some(EvalModality::Dlf), alpha: 0.45 },
    RowSpec { label: "EEG", modality: Some(EvalModality::Eeg), alpha: 1.0 },
    RowSpec { label: "MF", modality: Some(EvalModality::Mf), alpha: 0.0 },
    RowSpec { label: "Chance", modality: None, alpha: 0.0 },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    WindowSize,
    Alpha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub target: Target,
    pub row: String,
    pub axis_value: f64,
    pub report: EvaluationReport,
}

/// Complete grid of axis values x rows x targets; failed cells carry flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub protocol: Protocol,
    pub axis_values: Vec<f64>,
    pub rows: Vec<String>,
    pub targets: Vec<Target>,
    pub cells: Vec<SweepCell>,
}

impl SweepTable {
    pub fn cell(&self, target: Target, row: &str, axis_value: f64) -> Option<&SweepCell> {
        self.cells
            .iter()
            .find(|c| c.target == target && c.row == row && c.axis_value == axis_value)
    }
}

fn failed_cells(
    cfg: &CvConfig,
    data: &FeatureDataset,
    rows: &[(String, Option<EvalModality>, f64)],
    axis_value: impl Fn(usize) -> f64,
    reason: String,
) -> Vec<SweepCell> {
    let chance = super::metrics::chance_level(&data.labels(cfg.target));
    rows.iter()
        .enumerate()
        .map(|(i, (label, modality, alpha))| SweepCell {
            target: cfg.target,
            row: label.clone(),
            axis_value: axis_value(i),
            report: EvaluationReport::failed(
                modality.map_or("Chance", |m| m.name()),
                (*modality == Some(EvalModality::Dlf)).then_some(*alpha),
                cfg,
                chance,
                reason.clone(),
            ),
        })
        .collect()
}

/// Scores the window-sweep rows for every dataset (one per window size) and both targets.
pub fn sweep_windows<E: Executor>(datasets: &[FeatureDataset], base: &CvConfig, exec: &E) -> SweepTable {
    let rows: Vec<(String, Option<EvalModality>, f64)> = WINDOW_SWEEP_ROWS
        .iter()
        .map(|r| (String::from(r.label), r.modality, r.alpha))
        .collect();
    let mut cells = Vec::new();
    for target in Target::BOTH {
        for data in datasets {
            let cfg = CvConfig {
                window_s: data.window_s,
                target,
                ..*base
            };
            let outcome = collect_predictions(data, &cfg, false, exec).and_then(|set| {
                rows.iter()
                    .map(|(label, modality, alpha)| {
                        let report = match modality {
                            Some(m) => score(&set, *m, *alpha)?,
                            None => EvaluationReport::chance_row(&set),
                        };
                        Ok(SweepCell {
                            target,
                            row: label.clone(),
                            axis_value: data.window_s,
                            report,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            });
            match outcome {
                Ok(c) => cells.extend(c),
                Err(e) => cells.extend(failed_cells(&cfg, data, &rows, |_| data.window_s, format!("{e}"))),
            }
        }
    }
    SweepTable {
        axis: SweepAxis::WindowSize,
        protocol: base.protocol,
        axis_values: datasets.iter().map(|d| d.window_s).collect(),
        rows: rows.into_iter().map(|r| r.0).collect(),
        targets: Target::BOTH.to_vec(),
        cells,
    }
}

/// Decision-level fusion across the weight grid at one window size, both targets.
pub fn sweep_alpha<E: Executor>(data: &FeatureDataset, base: &CvConfig, exec: &E) -> SweepTable {
    let grid = alpha_grid();
    let rows: Vec<(String, Option<EvalModality>, f64)> =
        grid.iter().map(|&a| (String::from("DLF"), Some(EvalModality::Dlf), a)).collect();
    let mut cells = Vec::new();
    for target in Target::BOTH {
        let cfg = CvConfig {
            window_s: data.window_s,
            target,
            ..*base
        };
        let outcome = collect_predictions(data, &cfg, false, exec).and_then(|set| {
            grid.iter()
                .map(|&a| {
                    Ok(SweepCell {
                        target,
                        row: String::from("DLF"),
                        axis_value: a,
                        report: score(&set, EvalModality::Dlf, a)?,
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        });
        match outcome {
            Ok(c) => cells.extend(c),
            Err(e) => cells.extend(failed_cells(&cfg, data, &rows, |i| grid[i], format!("{e}"))),
        }
    }
    SweepTable {
        axis: SweepAxis::Alpha,
        protocol: base.protocol,
        axis_values: grid,
        rows: alloc::vec![String::from("DLF")],
        targets: Target::BOTH.to_vec(),
        cells,
    }
}
