//! Evaluation harness: normalization, folds, metrics, cross-validation
//! protocols, repetition averaging and the window/weight sweeps.

mod exec;
mod folds;
mod metrics;
mod normalize;
mod protocol;
mod sweep;

pub use exec::{Executor, SerialExecutor};
pub use folds::{grouped_kfold, leave_one_subject_out, stratified_kfold, Folds, SubjectSplit};
pub use metrics::{accuracy, chance_level, mcc, ConfusionMatrix};
pub use normalize::{minmax_normalize, MinMaxScaler, NormalizationMode, NormalizationScope};
pub use protocol::{
    collect_predictions, extract_trial_records, run_protocol, score, CellFlags, CvConfig,
    EvalModality, EvaluationReport, FeatureDataset, FoldMode, PredictionSet, Protocol,
    RepetitionResult, scale_split, SubjectResult, Target, TestPrediction, WindowRecord,
};
pub use sweep::{
    alpha_grid, sweep_alpha, sweep_windows, RowSpec, SweepAxis, SweepCell, SweepTable,
    ALPHA_STEPS, WINDOW_SIZES_S, WINDOW_SWEEP_ROWS,
};

use crate::dataset::DatasetError;
use crate::eeg::EegError;
use crate::fusion::FusionError;
use crate::music::MusicError;
use crate::svm::SvmError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no input rows")]
    EmptyInput,
    #[error("rows have different lengths")]
    RaggedRows,
    #[error("group labels do not match the number of rows")]
    LengthMismatch,
    #[error("need at least 2 folds, got {0}")]
    InvalidFolds(usize),
    #[error("need at least 1 repetition")]
    InvalidRepetitions,
    #[error("need at least 2 groups for grouped folds, got {0}")]
    NotEnoughGroups(usize),
    #[error("leave-one-subject-out needs at least 2 subjects, got {0}")]
    NotEnoughSubjects(usize),
    #[error("fusion weight {0} outside [0, 1]")]
    InvalidAlpha(f64),
    #[error(transparent)]
    Svm(#[from] SvmError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

/// Failure while turning a trial into feature records.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeatureError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Eeg(#[from] EegError),
    #[error(transparent)]
    Music(#[from] MusicError),
}
