//! Cross-validation protocols and report aggregation.
//!
//! A protocol run has two stages. [`collect_predictions`] trains the EEG and
//! music classifiers (and optionally the concatenated-feature classifier) on
//! every split of every repetition and keeps their test probabilities.
//! [`score`] turns those probabilities into decisions for one modality and
//! fusion weight and aggregates the metrics. Sweeps score one prediction set
//! many times; a single run does both stages once.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::exec::Executor;
use super::folds::{grouped_kfold, leave_one_subject_out, stratified_kfold};
use super::metrics::{accuracy, chance_level, mcc, ConfusionMatrix};
use super::normalize::{MinMaxScaler, NormalizationMode};
use super::{EvalError, FeatureError};
use crate::dataset::Trial;
use crate::eeg::{extract_eeg_features, prepare_recording, EegFeatureConfig};
use crate::fusion::{decide_p, fuse_probability};
use crate::music::{extract_music_features, DegeneracyFlags, FrameConfig};
use crate::seed;
use crate::stats::{mean, std_dev};
use crate::svm::{Classifier, SvmParams, TrainingSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Arousal,
    Valence,
}

impl Target {
    pub const BOTH: [Target; 2] = [Target::Arousal, Target::Valence];

    pub fn name(self) -> &'static str {
        match self {
            Target::Arousal => "arousal",
            Target::Valence => "valence",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Target::Arousal => 1,
            Target::Valence => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Stratified k-fold within each subject.
    #[serde(alias = "subject_dependent_10fold")]
    SubjectDependent,
    /// Train on all subjects but one, test on the one left out.
    #[serde(alias = "loso")]
    LeaveOneSubjectOut,
}

/// Classifier whose decisions are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EvalModality {
    #[serde(rename = "EEG")]
    Eeg,
    #[serde(rename = "MF")]
    Mf,
    /// Weighted decision-level fusion.
    #[serde(rename = "DLF")]
    Dlf,
    /// One classifier on the concatenated features.
    #[serde(rename = "FLF")]
    Flf,
}

impl EvalModality {
    pub fn name(self) -> &'static str {
        match self {
            EvalModality::Eeg => "EEG",
            EvalModality::Mf => "MF",
            EvalModality::Dlf => "DLF",
            EvalModality::Flf => "FLF",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldMode {
    #[default]
    Stratified,
    /// All windows of a song share a fold.
    GroupedBySong,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub protocol: Protocol,
    pub folds: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub window_s: f64,
    /// EEG weight for decision-level fusion.
    pub alpha: f64,
    pub modality: EvalModality,
    pub target: Target,
    pub normalization: NormalizationMode,
    pub fold_mode: FoldMode,
    /// Hyper-parameters of every classifier; the seed field is replaced per model.
    pub svm: SvmParams,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::SubjectDependent,
            folds: 10,
            repetitions: 5,
            seed: 0,
            window_s: 2.0,
            alpha: 0.55,
            modality: EvalModality::Dlf,
            target: Target::Arousal,
            normalization: NormalizationMode::SplitRespecting,
            fold_mode: FoldMode::Stratified,
            svm: SvmParams::default(),
        }
    }
}

impl CvConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        if self.folds < 2 {
            return Err(EvalError::InvalidFolds(self.folds));
        }
        if self.repetitions < 1 {
            return Err(EvalError::InvalidRepetitions);
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(EvalError::InvalidAlpha(self.alpha));
        }
        Ok(())
    }
}

/// Features and labels of one analysis window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRecord {
    /// Index into [`FeatureDataset::subjects`].
    pub subject: u32,
    pub song: u32,
    /// Dataset-wide trial index.
    pub trial: u32,
    /// Position of the window inside its trial.
    pub window_index: u32,
    pub start_s: f64,
    pub eeg: Vec<f64>,
    pub music: Vec<f64>,
    pub music_flags: DegeneracyFlags,
    pub arousal_high: bool,
    pub valence_positive: bool,
}

impl WindowRecord {
    /// Stable identifier used for fusion bookkeeping and tie-break seeds.
    pub fn window_id(&self) -> u64 {
        (u64::from(self.trial) << 32) | u64::from(self.window_index)
    }

    pub fn label(&self, target: Target) -> bool {
        match target {
            Target::Arousal => self.arousal_high,
            Target::Valence => self.valence_positive,
        }
    }
}

/// Windowed features of a whole dataset at one window size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDataset {
    pub window_s: f64,
    pub subjects: Vec<String>,
    pub records: Vec<WindowRecord>,
}

impl FeatureDataset {
    pub fn labels(&self, target: Target) -> Vec<bool> {
        self.records.iter().map(|r| r.label(target)).collect()
    }

    fn subject_ids(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = self.records.iter().map(|r| r.subject).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Cuts a trial into back-to-back windows and extracts both feature blocks.
#[allow(clippy::too_many_arguments)]
pub fn extract_trial_records(
    trial: &Trial,
    subject: u32,
    song: u32,
    trial_index: u32,
    window_s: f64,
    hop_s: f64,
    eeg_cfg: &EegFeatureConfig,
    frame_cfg: &FrameConfig,
) -> Result<Vec<WindowRecord>, FeatureError> {
    let eeg = prepare_recording(&trial.eeg, eeg_cfg)?;
    let mut out = Vec::new();
    for (i, w) in trial.windows(window_s, hop_s)?.iter().enumerate() {
        let (start, len) = w.sample_range(eeg.sample_rate_hz());
        let eeg_features = extract_eeg_features(&eeg.slice(start, len), eeg_cfg)?;
        let music = extract_music_features(&trial.audio_window(w), frame_cfg)?;
        let label = trial.label(w)?;
        out.push(WindowRecord {
            subject,
            song,
            trial: trial_index,
            window_index: i as u32,
            start_s: w.start_s,
            eeg: eeg_features.to_vec(),
            music: music.vector.to_vec(),
            music_flags: music.flags,
            arousal_high: label.arousal_high(),
            valence_positive: label.valence_positive(),
        });
    }
    Ok(out)
}

/// Test-set probabilities of class 1 for one window in one repetition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestPrediction {
    pub subject: u32,
    pub window_id: u64,
    pub truth: bool,
    pub p_eeg: f64,
    pub p_music: f64,
    pub p_flf: Option<f64>,
}

/// Counters of conditions that did not stop a run but deserve a look.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFlags {
    /// Training splits with a single class; their test windows got that class.
    pub degenerate_training_folds: usize,
    /// Subjects whose labels held one class, so stratification was moot.
    pub single_class_stratification: usize,
    /// Classifiers stopped by the iteration cap.
    pub unconverged_models: usize,
    /// Calibrations whose slope had to be clamped.
    pub clamped_calibrations: usize,
    /// Set when the cell could not be computed at all.
    pub failed: Option<String>,
}

impl CellFlags {
    fn absorb(&mut self, o: &CellFlags) {
        self.degenerate_training_folds += o.degenerate_training_folds;
        self.single_class_stratification += o.single_class_stratification;
        self.unconverged_models += o.unconverged_models;
        self.clamped_calibrations += o.clamped_calibrations;
    }
}

/// Everything [`score`] needs: probabilities for each repetition plus labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub protocol: Protocol,
    pub target: Target,
    pub window_s: f64,
    /// Seed shared by every modality and weight scored from this set.
    pub cell_seed: u64,
    pub repetitions: Vec<Vec<TestPrediction>>,
    /// Subject indices present, ascending.
    pub subjects: Vec<u32>,
    pub subject_names: Vec<String>,
    /// Majority-class share of each subject's windows, aligned with `subjects`.
    pub subject_chance: Vec<f64>,
    pub flags: CellFlags,
}

const FOLD_STREAM: u64 = 0xF01D;
const MODEL_STREAM: u64 = 0x5E3D;
const TIE_STREAM: u64 = 0x71E5;

struct Job {
    rep: usize,
    subject: u32,
    fold: usize,
    train: Vec<usize>,
    test: Vec<usize>,
}

/// Seed of a cell. Depends on the window size and target but not on the
/// modality or fusion weight, so every modality sees the same folds, models and
/// tie-breaks.
fn cell_seed(cfg: &CvConfig) -> u64 {
    let window_ms = libm::round(cfg.window_s * 1000.0) as u64;
    let protocol = match cfg.protocol {
        Protocol::SubjectDependent => 1,
        Protocol::LeaveOneSubjectOut => 2,
    };
    seed::derive(cfg.seed, &[window_ms, cfg.target.tag(), protocol])
}

fn build_jobs(data: &FeatureDataset, cfg: &CvConfig, base: u64, flags: &mut CellFlags) -> Result<Vec<Job>, EvalError> {
    let subjects = data.subject_ids();
    let mut jobs = Vec::new();
    match cfg.protocol {
        Protocol::SubjectDependent => {
            for rep in 0..cfg.repetitions {
                for &s in &subjects {
                    let members: Vec<usize> = (0..data.records.len())
                        .filter(|&i| data.records[i].subject == s)
                        .collect();
                    let labels: Vec<bool> = members.iter().map(|&i| data.records[i].label(cfg.target)).collect();
                    let fold_seed = seed::derive(base, &[FOLD_STREAM, rep as u64, u64::from(s)]);
                    let folds = match cfg.fold_mode {
                        FoldMode::Stratified => stratified_kfold(&labels, cfg.folds, fold_seed)?,
                        FoldMode::GroupedBySong => {
                            let songs: Vec<u32> = members.iter().map(|&i| data.records[i].song).collect();
                            grouped_kfold(&songs, cfg.folds, fold_seed)?
                        }
                    };
                    if folds.single_class && rep == 0 {
                        flags.single_class_stratification += 1;
                    }
                    for (f, fold) in folds.folds.iter().enumerate() {
                        if fold.is_empty() {
                            continue;
                        }
                        jobs.push(Job {
                            rep,
                            subject: s,
                            fold: f,
                            train: folds.train_indices(f).iter().map(|&j| members[j]).collect(),
                            test: fold.iter().map(|&j| members[j]).collect(),
                        });
                    }
                }
            }
        }
        Protocol::LeaveOneSubjectOut => {
            let all: Vec<u32> = data.records.iter().map(|r| r.subject).collect();
            let splits = leave_one_subject_out(&all)?;
            for rep in 0..cfg.repetitions {
                for split in &splits {
                    let (test, train): (Vec<usize>, Vec<usize>) =
                        (0..data.records.len()).partition(|&i| data.records[i].subject == split.test_subject);
                    jobs.push(Job {
                        rep,
                        subject: split.test_subject,
                        fold: 0,
                        train,
                        test,
                    });
                }
            }
        }
    }
    Ok(jobs)
}

/// Scales the training and test rows of one split with a scaler fitted per the mode.
pub fn scale_split(rows_train: &[&[f64]], rows_test: &[&[f64]], mode: NormalizationMode) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>), EvalError> {
    let scaler = match mode {
        NormalizationMode::SplitRespecting => MinMaxScaler::fit(rows_train)?,
        NormalizationMode::WholeScope => {
            let mut all: Vec<&[f64]> = rows_train.to_vec();
            all.extend_from_slice(rows_test);
            MinMaxScaler::fit(&all)?
        }
    };
    Ok((scaler.transform_all(rows_train), scaler.transform_all(rows_test)))
}

/// Trains one calibrated classifier and returns test probabilities.
fn fit_predict(
    train_rows: &[Vec<f64>],
    positive: &[bool],
    test_rows: &[Vec<f64>],
    params: &SvmParams,
    flags: &mut CellFlags,
) -> Result<Vec<f64>, EvalError> {
    let data = TrainingSet::from_bools(train_rows, positive)?;
    let clf = Classifier::fit(&data, params)?;
    if !clf.model.converged {
        flags.unconverged_models += 1;
    }
    if clf.calibration.clamped {
        flags.clamped_calibrations += 1;
    }
    Ok(test_rows.iter().map(|r| clf.predict_proba(r)).collect())
}

fn run_job(
    data: &FeatureDataset,
    cfg: &CvConfig,
    base: u64,
    with_flf: bool,
    job: &Job,
) -> Result<(Vec<TestPrediction>, CellFlags), EvalError> {
    let mut flags = CellFlags::default();
    let recs = &data.records;
    let positive: Vec<bool> = job.train.iter().map(|&i| recs[i].label(cfg.target)).collect();
    let ones = positive.iter().filter(|&&p| p).count();
    let n_test = job.test.len();

    let (p_eeg, p_music, p_flf) = if ones == 0 || ones == positive.len() {
        // Nothing to separate: every classifier answers with the training class.
        flags.degenerate_training_folds += 1;
        let p = if ones == 0 { 0.0 } else { 1.0 };
        (alloc::vec![p; n_test], alloc::vec![p; n_test], with_flf.then(|| alloc::vec![p; n_test]))
    } else {
        let rows = |idx: &[usize], f: fn(&WindowRecord) -> &[f64]| -> Vec<&[f64]> {
            idx.iter().map(|&i| f(&recs[i])).collect()
        };
        let (eeg_tr, eeg_te) = scale_split(&rows(&job.train, |r| &r.eeg), &rows(&job.test, |r| &r.eeg), cfg.normalization)?;
        let (mus_tr, mus_te) = scale_split(&rows(&job.train, |r| &r.music), &rows(&job.test, |r| &r.music), cfg.normalization)?;
        let model_seed = seed::derive(base, &[MODEL_STREAM, job.rep as u64, u64::from(job.subject), job.fold as u64]);
        let params = |stream: u64| SvmParams {
            seed: seed::derive(model_seed, &[stream]),
            ..cfg.svm
        };
        let p_eeg = fit_predict(&eeg_tr, &positive, &eeg_te, &params(0), &mut flags)?;
        let p_music = fit_predict(&mus_tr, &positive, &mus_te, &params(1), &mut flags)?;
        let p_flf = if with_flf {
            let cat = |a: &[Vec<f64>], b: &[Vec<f64>]| -> Vec<Vec<f64>> {
                a.iter().zip(b).map(|(x, y)| x.iter().chain(y).copied().collect()).collect()
            };
            Some(fit_predict(&cat(&eeg_tr, &mus_tr), &positive, &cat(&eeg_te, &mus_te), &params(2), &mut flags)?)
        } else {
            None
        };
        (p_eeg, p_music, p_flf)
    };

    let preds = job
        .test
        .iter()
        .enumerate()
        .map(|(t, &i)| TestPrediction {
            subject: recs[i].subject,
            window_id: recs[i].window_id(),
            truth: recs[i].label(cfg.target),
            p_eeg: p_eeg[t],
            p_music: p_music[t],
            p_flf: p_flf.as_ref().map(|p| p[t]),
        })
        .collect();
    Ok((preds, flags))
}

/// Trains every split of every repetition and keeps the test probabilities.
pub fn collect_predictions<E: Executor>(
    data: &FeatureDataset,
    cfg: &CvConfig,
    with_flf: bool,
    exec: &E,
) -> Result<PredictionSet, EvalError> {
    cfg.validate()?;
    if data.records.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let base = cell_seed(cfg);
    let mut flags = CellFlags::default();
    let jobs = build_jobs(data, cfg, base, &mut flags)?;
    let results = exec.map(jobs, |job| run_job(data, cfg, base, with_flf, &job).map(|r| (job.rep, r)));

    let mut repetitions = alloc::vec![Vec::new(); cfg.repetitions];
    for r in results {
        let (rep, (preds, f)) = r?;
        flags.absorb(&f);
        repetitions[rep].extend(preds);
    }
    let subjects = data.subject_ids();
    let subject_chance = subjects
        .iter()
        .map(|&s| {
            let labels: Vec<bool> = data
                .records
                .iter()
                .filter(|r| r.subject == s)
                .map(|r| r.label(cfg.target))
                .collect();
            chance_level(&labels)
        })
        .collect();
    Ok(PredictionSet {
        protocol: cfg.protocol,
        target: cfg.target,
        window_s: cfg.window_s,
        cell_seed: base,
        repetitions,
        subjects,
        subject_names: data.subjects.clone(),
        subject_chance,
        flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepetitionResult {
    /// Mean across subjects.
    pub accuracy: f64,
    pub mcc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectResult {
    pub subject: String,
    /// Mean across repetitions.
    pub accuracy: f64,
    pub mcc: f64,
    pub chance_level: f64,
    pub windows: usize,
    /// Confusion counts pooled over folds and repetitions.
    pub confusion: ConfusionMatrix,
}

/// Metrics of one (modality, weight, window size, target, protocol) cell.
///
/// Means are taken over repetitions, each repetition being the mean over
/// subjects. Standard deviations are across subjects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub modality: String,
    pub alpha: Option<f64>,
    pub protocol: Protocol,
    pub target: Target,
    pub window_s: f64,
    pub accuracy_mean: f64,
    pub accuracy_std: f64,
    pub mcc_mean: f64,
    pub mcc_std: f64,
    pub chance_level: f64,
    pub chance_std: f64,
    pub per_repetition: Vec<RepetitionResult>,
    pub per_subject: Vec<SubjectResult>,
    pub flags: CellFlags,
}

impl EvaluationReport {
    /// Placeholder for a cell that could not be computed: chance accuracy, MCC 0.
    pub fn failed(
        modality: &str,
        alpha: Option<f64>,
        cfg: &CvConfig,
        chance_level: f64,
        reason: String,
    ) -> Self {
        Self {
            modality: modality.into(),
            alpha,
            protocol: cfg.protocol,
            target: cfg.target,
            window_s: cfg.window_s,
            accuracy_mean: chance_level,
            accuracy_std: 0.0,
            mcc_mean: 0.0,
            mcc_std: 0.0,
            chance_level,
            chance_std: 0.0,
            per_repetition: Vec::new(),
            per_subject: Vec::new(),
            flags: CellFlags {
                failed: Some(reason),
                ..CellFlags::default()
            },
        }
    }

    /// The majority-class baseline of the same test sets, shaped like a cell.
    pub fn chance_row(set: &PredictionSet) -> Self {
        let per_subject: Vec<SubjectResult> = set
            .subjects
            .iter()
            .zip(&set.subject_chance)
            .map(|(&s, &c)| SubjectResult {
                subject: subject_name(set, s),
                accuracy: c,
                mcc: 0.0,
                chance_level: c,
                windows: 0,
                confusion: ConfusionMatrix::default(),
            })
            .collect();
        let chance = mean(&set.subject_chance);
        let spread = std_dev(&set.subject_chance);
        Self {
            modality: "Chance".into(),
            alpha: None,
            protocol: set.protocol,
            target: set.target,
            window_s: set.window_s,
            accuracy_mean: chance,
            accuracy_std: spread,
            mcc_mean: 0.0,
            mcc_std: 0.0,
            chance_level: chance,
            chance_std: spread,
            per_repetition: Vec::new(),
            per_subject,
            flags: CellFlags::default(),
        }
    }
}

fn subject_name(set: &PredictionSet, s: u32) -> String {
    set.subject_names
        .get(s as usize)
        .cloned()
        .unwrap_or_else(|| alloc::format!("{s}"))
}

/// Probability of class 1 that `modality` assigns to a test window.
fn modality_probability(p: &TestPrediction, modality: EvalModality, alpha: f64) -> Result<f64, EvalError> {
    Ok(match modality {
        EvalModality::Eeg => p.p_eeg,
        EvalModality::Mf => p.p_music,
        EvalModality::Dlf => fuse_probability(p.p_eeg, p.p_music, alpha),
        EvalModality::Flf => p.p_flf.ok_or(EvalError::EmptyInput)?,
    })
}

/// Decides every test window for `modality` and aggregates the metrics.
///
/// Ties at one half are broken by a coin seeded from the cell seed, the
/// repetition and the window, so EEG and DLF at weight 1 decide identically.
pub fn score(set: &PredictionSet, modality: EvalModality, alpha: f64) -> Result<EvaluationReport, EvalError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(EvalError::InvalidAlpha(alpha));
    }
    let n_sub = set.subjects.len();
    let pos = |s: u32| set.subjects.binary_search(&s).unwrap_or(0);
    let mut per_rep = Vec::with_capacity(set.repetitions.len());
    let mut acc_by_subject = alloc::vec![Vec::new(); n_sub];
    let mut mcc_by_subject = alloc::vec![Vec::new(); n_sub];
    let mut pooled = alloc::vec![ConfusionMatrix::default(); n_sub];
    let mut windows = alloc::vec![0usize; n_sub];

    for (rep, preds) in set.repetitions.iter().enumerate() {
        let mut cms = alloc::vec![ConfusionMatrix::default(); n_sub];
        for p in preds {
            let prob = modality_probability(p, modality, alpha)?;
            let tie_seed = seed::derive(set.cell_seed, &[TIE_STREAM, rep as u64, p.window_id]);
            let pred = decide_p(prob, tie_seed).is_one();
            cms[pos(p.subject)].record(p.truth, pred);
        }
        let mut accs = Vec::with_capacity(n_sub);
        let mut mccs = Vec::with_capacity(n_sub);
        for (k, cm) in cms.iter().enumerate() {
            if cm.total() == 0 {
                continue;
            }
            accs.push(accuracy(cm));
            mccs.push(mcc(cm));
            acc_by_subject[k].push(accuracy(cm));
            mcc_by_subject[k].push(mcc(cm));
            pooled[k].merge(cm);
            if rep == 0 {
                windows[k] = cm.total() as usize;
            }
        }
        per_rep.push(RepetitionResult {
            accuracy: mean(&accs),
            mcc: mean(&mccs),
        });
    }

    let per_subject: Vec<SubjectResult> = (0..n_sub)
        .map(|k| SubjectResult {
            subject: subject_name(set, set.subjects[k]),
            accuracy: mean(&acc_by_subject[k]),
            mcc: mean(&mcc_by_subject[k]),
            chance_level: set.subject_chance[k],
            windows: windows[k],
            confusion: pooled[k],
        })
        .collect();
    let subject_acc: Vec<f64> = per_subject.iter().map(|s| s.accuracy).collect();
    let subject_mcc: Vec<f64> = per_subject.iter().map(|s| s.mcc).collect();
    let rep_acc: Vec<f64> = per_rep.iter().map(|r| r.accuracy).collect();
    let rep_mcc: Vec<f64> = per_rep.iter().map(|r| r.mcc).collect();
    Ok(EvaluationReport {
        modality: modality.name().into(),
        alpha: (modality == EvalModality::Dlf).then_some(alpha),
        protocol: set.protocol,
        target: set.target,
        window_s: set.window_s,
        accuracy_mean: mean(&rep_acc),
        accuracy_std: std_dev(&subject_acc),
        mcc_mean: mean(&rep_mcc),
        mcc_std: std_dev(&subject_mcc),
        chance_level: mean(&set.subject_chance),
        chance_std: std_dev(&set.subject_chance),
        per_repetition: per_rep,
        per_subject,
        flags: set.flags.clone(),
    })
}

/// Runs one protocol end to end for `cfg.modality`.
pub fn run_protocol<E: Executor>(data: &FeatureDataset, cfg: &CvConfig, exec: &E) -> Result<EvaluationReport, EvalError> {
    let set = collect_predictions(data, cfg, cfg.modality == EvalModality::Flf, exec)?;
    score(&set, cfg.modality, cfg.alpha)
}
