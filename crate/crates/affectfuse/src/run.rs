//! Evaluation runs: configuration resolution, extraction, scoring and the
//! files written into a run directory.
//!
//! A run directory always receives `config.toml`, the fully resolved
//! configuration. Depending on the mode it then holds `report.json` and
//! `table.txt`, or `sweep_windows.json` and `table_windows.txt`, or
//! `sweep_alpha.json`, `alpha_series.csv` and `table_alpha.txt`.

use std::fs;
use std::path::{Path, PathBuf};

use affectfuse_core::eeg::EegFeatureConfig;
use affectfuse_core::eval::{
    run_protocol, sweep_alpha, sweep_windows, CvConfig, EvalError, EvalModality, EvaluationReport,
    Executor, FeatureDataset, FoldMode, NormalizationMode, Protocol, SweepTable, Target,
    WINDOW_SIZES_S,
};
use affectfuse_core::music::FrameConfig;
use affectfuse_core::seed;
use affectfuse_core::svm::SvmParams;
use serde::{Deserialize, Serialize};

use crate::extract::{extract_dataset, ExtractError, ExtractSettings, TrialOutcome};
use crate::formats::{load_manifest, FormatError};
use crate::tables;

pub const CONFIG_FILE: &str = "config.toml";
pub const REPORT_FILE: &str = "report.json";
pub const TABLE_FILE: &str = "table.txt";
pub const WINDOW_SWEEP_FILE: &str = "sweep_windows.json";
pub const WINDOW_TABLE_FILE: &str = "table_windows.txt";
pub const ALPHA_SWEEP_FILE: &str = "sweep_alpha.json";
pub const ALPHA_SERIES_FILE: &str = "alpha_series.csv";
pub const ALPHA_TABLE_FILE: &str = "table_alpha.txt";

const SHUFFLE_STREAM: u64 = 0x5_4F1E;

/// Every setting is optional; a config file and the command line each give
/// one of these and the command line wins.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub manifest: Option<PathBuf>,
    pub features_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub protocol: Option<Protocol>,
    pub modality: Option<EvalModality>,
    pub targets: Option<Vec<Target>>,
    pub window_s: Option<f64>,
    pub hop_s: Option<f64>,
    pub sweep_windows: Option<bool>,
    pub alpha: Option<f64>,
    pub sweep_alpha: Option<bool>,
    pub folds: Option<usize>,
    pub repetitions: Option<usize>,
    pub normalization: Option<NormalizationMode>,
    pub fold_mode: Option<FoldMode>,
    pub shuffle_labels: Option<bool>,
    pub k_max: Option<usize>,
    pub bandpass: Option<[f64; 2]>,
    pub frame_len: Option<usize>,
    pub frame_hop: Option<usize>,
    pub svm_c: Option<f64>,
    pub kernel_scale: Option<f64>,
    pub svm_tol: Option<f64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($f:ident),*) => {
        PartialConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

impl PartialConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self, FormatError> {
        toml::from_str(text).map_err(|e| FormatError::parse(origin, e.message()))
    }

    pub fn load(path: &Path) -> Result<Self, FormatError> {
        let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
        Self::from_toml(&text, path)
    }

    /// Fields set in `top` replace those of `self`.
    pub fn overlay(self, top: PartialConfig) -> PartialConfig {
        let base = self;
        overlay!(
            base, top, manifest, features_dir, seed, protocol, modality, targets, window_s, hop_s,
            sweep_windows, alpha, sweep_alpha, folds, repetitions, normalization, fold_mode,
            shuffle_labels, k_max, bandpass, frame_len, frame_hop, svm_c, kernel_scale, svm_tol
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Fully resolved settings of one evaluation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub manifest: PathBuf,
    /// Feature cache root; defaults to `features/` next to the manifest.
    pub features_dir: PathBuf,
    pub seed: u64,
    pub protocol: Protocol,
    pub modality: EvalModality,
    /// Targets of a single-configuration run; sweeps always cover both.
    pub targets: Vec<Target>,
    pub window_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hop_s: Option<f64>,
    pub sweep_windows: bool,
    pub alpha: f64,
    pub sweep_alpha: bool,
    pub folds: usize,
    pub repetitions: usize,
    pub normalization: NormalizationMode,
    pub fold_mode: FoldMode,
    /// Permute labels within each subject before evaluation (negative control).
    pub shuffle_labels: bool,
    pub k_max: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandpass: Option<[f64; 2]>,
    pub frame_len: usize,
    pub frame_hop: usize,
    pub svm_c: f64,
    pub kernel_scale: f64,
    pub svm_tol: f64,
}

impl RunConfig {
    pub fn resolve(p: PartialConfig) -> Result<Self, RunError> {
        let cv = CvConfig::default();
        let svm = SvmParams::default();
        let frames = FrameConfig::default();
        let manifest = p
            .manifest
            .ok_or_else(|| RunError::Config("no manifest given".into()))?;
        let features_dir = p.features_dir.unwrap_or_else(|| {
            manifest
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join("features")
        });
        let cfg = RunConfig {
            features_dir,
            manifest,
            seed: p.seed.unwrap_or(cv.seed),
            protocol: p.protocol.unwrap_or(cv.protocol),
            modality: p.modality.unwrap_or(cv.modality),
            targets: p.targets.unwrap_or_else(|| Target::BOTH.to_vec()),
            window_s: p.window_s.unwrap_or(cv.window_s),
            hop_s: p.hop_s,
            sweep_windows: p.sweep_windows.unwrap_or(false),
            alpha: p.alpha.unwrap_or(cv.alpha),
            sweep_alpha: p.sweep_alpha.unwrap_or(false),
            folds: p.folds.unwrap_or(cv.folds),
            repetitions: p.repetitions.unwrap_or(cv.repetitions),
            normalization: p.normalization.unwrap_or(cv.normalization),
            fold_mode: p.fold_mode.unwrap_or(cv.fold_mode),
            shuffle_labels: p.shuffle_labels.unwrap_or(false),
            k_max: p.k_max.unwrap_or(EegFeatureConfig::DEFAULT_K_MAX),
            bandpass: p.bandpass,
            frame_len: p.frame_len.unwrap_or(frames.frame_len),
            frame_hop: p.frame_hop.unwrap_or(frames.hop),
            svm_c: p.svm_c.unwrap_or(svm.c),
            kernel_scale: p.kernel_scale.unwrap_or(svm.kernel_scale),
            svm_tol: p.svm_tol.unwrap_or(svm.tol),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), RunError> {
        let bad = |m: &str| Err(RunError::Config(m.into()));
        if self.sweep_windows && self.sweep_alpha {
            return bad("the window sweep and the fusion-weight sweep are exclusive");
        }
        if self.targets.is_empty() {
            return bad("no targets selected");
        }
        if !(self.window_s > 0.0) {
            return bad("window length must be positive");
        }
        if self.hop_s.is_some_and(|h| !(h > 0.0)) {
            return bad("hop must be positive");
        }
        self.frames()
            .validate()
            .map_err(|e| RunError::Config(e.to_string()))?;
        self.cv(Target::Arousal, self.window_s).validate()?;
        Ok(())
    }

    pub fn frames(&self) -> FrameConfig {
        FrameConfig {
            frame_len: self.frame_len,
            hop: self.frame_hop,
        }
    }

    pub fn extract_settings(&self, window_s: f64) -> ExtractSettings {
        ExtractSettings {
            window_s,
            hop_s: self.hop_s,
            eeg: EegFeatureConfig {
                k_max: self.k_max,
                bandpass: self.bandpass.map(|[lo, hi]| (lo, hi)),
            },
            frames: self.frames(),
        }
    }

    pub fn cv(&self, target: Target, window_s: f64) -> CvConfig {
        CvConfig {
            protocol: self.protocol,
            folds: self.folds,
            repetitions: self.repetitions,
            seed: self.seed,
            window_s,
            alpha: self.alpha,
            modality: self.modality,
            target,
            normalization: self.normalization,
            fold_mode: self.fold_mode,
            svm: SvmParams {
                c: self.svm_c,
                kernel_scale: self.kernel_scale,
                tol: self.svm_tol,
                ..SvmParams::default()
            },
        }
    }

    /// Window sizes whose features the run needs.
    pub fn window_sizes(&self) -> Vec<f64> {
        if self.sweep_windows {
            WINDOW_SIZES_S.to_vec()
        } else {
            vec![self.window_s]
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config fields are TOML-representable")
    }
}

/// Permutes the label pairs among each subject's windows.
pub fn shuffle_labels(data: &mut FeatureDataset, seed_value: u64) {
    let mut subjects: Vec<u32> = data.records.iter().map(|r| r.subject).collect();
    subjects.sort_unstable();
    subjects.dedup();
    for s in subjects {
        let idx: Vec<usize> = (0..data.records.len())
            .filter(|&i| data.records[i].subject == s)
            .collect();
        let mut labels: Vec<(bool, bool)> = idx
            .iter()
            .map(|&i| (data.records[i].arousal_high, data.records[i].valence_positive))
            .collect();
        seed::shuffle(&mut labels, &mut seed::rng(seed::derive(seed_value, &[SHUFFLE_STREAM, u64::from(s)])));
        for (&i, (a, v)) in idx.iter().zip(labels) {
            data.records[i].arousal_high = a;
            data.records[i].valence_positive = v;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunResult {
    Single(Vec<EvaluationReport>),
    WindowSweep(SweepTable),
    AlphaSweep(SweepTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub result: RunResult,
    pub extraction: Vec<TrialOutcome>,
    /// Files written into the run directory, in order.
    pub files: Vec<PathBuf>,
    pub text: String,
}

fn write(path: PathBuf, contents: &str, files: &mut Vec<PathBuf>) -> Result<(), FormatError> {
    fs::write(&path, contents).map_err(|e| FormatError::io(&path, e))?;
    files.push(path);
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports are plain data") + "\n"
}

/// Extracts the needed features (through the cache) for every window size.
pub fn load_datasets<E: Executor>(
    cfg: &RunConfig,
    exec: &E,
    mut on_trial: impl FnMut(f64, &TrialOutcome),
) -> Result<(Vec<FeatureDataset>, Vec<TrialOutcome>), RunError> {
    let manifest = load_manifest(&cfg.manifest)?;
    let mut datasets = Vec::new();
    let mut outcomes = Vec::new();
    for w in cfg.window_sizes() {
        let (mut data, o) = extract_dataset(&manifest, &cfg.features_dir, &cfg.extract_settings(w), exec)?;
        for t in &o {
            on_trial(w, t);
        }
        if cfg.shuffle_labels {
            shuffle_labels(&mut data, cfg.seed);
        }
        datasets.push(data);
        outcomes.extend(o);
    }
    Ok((datasets, outcomes))
}

/// Runs the configured evaluation and writes its outputs into `out_dir`.
pub fn evaluate<E: Executor>(
    cfg: &RunConfig,
    out_dir: &Path,
    exec: &E,
    on_trial: impl FnMut(f64, &TrialOutcome),
) -> Result<RunSummary, RunError> {
    fs::create_dir_all(out_dir).map_err(|e| FormatError::io(out_dir, e))?;
    let mut files = Vec::new();
    write(out_dir.join(CONFIG_FILE), &cfg.to_toml(), &mut files)?;
    let (datasets, extraction) = load_datasets(cfg, exec, on_trial)?;
    let (result, text) = if cfg.sweep_windows {
        let table = sweep_windows(&datasets, &cfg.cv(Target::Arousal, cfg.window_s), exec);
        write(out_dir.join(WINDOW_SWEEP_FILE), &to_json(&table), &mut files)?;
        let text = tables::render_window_sweep(&table);
        write(out_dir.join(WINDOW_TABLE_FILE), &text, &mut files)?;
        (RunResult::WindowSweep(table), text)
    } else if cfg.sweep_alpha {
        let table = sweep_alpha(&datasets[0], &cfg.cv(Target::Arousal, cfg.window_s), exec);
        write(out_dir.join(ALPHA_SWEEP_FILE), &to_json(&table), &mut files)?;
        write(out_dir.join(ALPHA_SERIES_FILE), &tables::alpha_series_csv(&table), &mut files)?;
        let text = tables::render_alpha_sweep(&table);
        write(out_dir.join(ALPHA_TABLE_FILE), &text, &mut files)?;
        (RunResult::AlphaSweep(table), text)
    } else {
        let reports = cfg
            .targets
            .iter()
            .map(|&t| run_protocol(&datasets[0], &cfg.cv(t, cfg.window_s), exec))
            .collect::<Result<Vec<_>, _>>()?;
        write(out_dir.join(REPORT_FILE), &to_json(&reports), &mut files)?;
        let text = tables::render_reports(&reports);
        write(out_dir.join(TABLE_FILE), &text, &mut files)?;
        (RunResult::Single(reports), text)
    };
    Ok(RunSummary {
        result,
        extraction,
        files,
        text,
    })
}

/// Re-renders the tables of an existing run directory.
pub fn render_run_dir(dir: &Path) -> Result<String, RunError> {
    let read = |name: &str| -> Result<Option<String>, FormatError> {
        let p = dir.join(name);
        if p.is_file() {
            fs::read_to_string(&p).map(Some).map_err(|e| FormatError::io(&p, e))
        } else {
            Ok(None)
        }
    };
    let parse_err = |name: &str, e: serde_json::Error| FormatError::parse(dir.join(name), e);
    let mut out = String::new();
    if let Some(text) = read(REPORT_FILE)? {
        let reports: Vec<EvaluationReport> =
            serde_json::from_str(&text).map_err(|e| parse_err(REPORT_FILE, e))?;
        out.push_str(&tables::render_reports(&reports));
    }
    if let Some(text) = read(WINDOW_SWEEP_FILE)? {
        let table: SweepTable = serde_json::from_str(&text).map_err(|e| parse_err(WINDOW_SWEEP_FILE, e))?;
        out.push_str(&tables::render_window_sweep(&table));
    }
    if let Some(text) = read(ALPHA_SWEEP_FILE)? {
        let table: SweepTable = serde_json::from_str(&text).map_err(|e| parse_err(ALPHA_SWEEP_FILE, e))?;
        out.push_str(&tables::render_alpha_sweep(&table));
    }
    if out.is_empty() {
        return Err(RunError::Config(format!("{} holds no reports", dir.display())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partial(manifest: &str) -> PartialConfig {
        PartialConfig {
            manifest: Some(manifest.into()),
            ..Default::default()
        }
    }

    #[test]
    fn defaults_and_overrides() {
        let cfg = RunConfig::resolve(partial("/d/manifest.toml")).unwrap();
        assert_eq!(cfg.features_dir, PathBuf::from("/d/features"));
        assert_eq!(cfg.folds, 10);
        assert_eq!(cfg.repetitions, 5);
        assert_eq!(cfg.alpha, 0.55);
        assert_eq!(cfg.window_s, 2.0);
        let file = PartialConfig::from_toml("alpha = 0.3\nfolds = 4\nprotocol = \"loso\"\n", Path::new("c")).unwrap();
        let flags = PartialConfig {
            alpha: Some(0.7),
            ..partial("/m.toml")
        };
        let cfg = RunConfig::resolve(file.overlay(flags)).unwrap();
        assert_eq!(cfg.alpha, 0.7);
        assert_eq!(cfg.folds, 4);
        assert_eq!(cfg.protocol, Protocol::LeaveOneSubjectOut);
    }

    #[test]
    fn snapshot_round_trips() {
        let cfg = RunConfig::resolve(PartialConfig {
            bandpass: Some([0.5, 60.0]),
            ..partial("m.toml")
        })
        .unwrap();
        let text = cfg.to_toml();
        let back = RunConfig::resolve(PartialConfig::from_toml(&text, Path::new("c")).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_conflicts_and_bad_values() {
        let both = PartialConfig {
            sweep_windows: Some(true),
            sweep_alpha: Some(true),
            ..partial("m")
        };
        assert!(matches!(RunConfig::resolve(both), Err(RunError::Config(_))));
        let alpha = PartialConfig {
            alpha: Some(1.5),
            ..partial("m")
        };
        assert!(matches!(RunConfig::resolve(alpha), Err(RunError::Eval(_))));
        assert!(RunConfig::resolve(PartialConfig::default()).is_err());
        assert!(PartialConfig::from_toml("nonsense = 1", Path::new("c")).is_err());
    }
}
