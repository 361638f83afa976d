use std::path::PathBuf;
use std::process::ExitCode;

use affectfuse::core::eval::{EvalModality, FoldMode, NormalizationMode, Protocol, Target};
use affectfuse::extract::{extract_dataset, CacheStatus, ExtractSettings, TrialOutcome};
use affectfuse::formats::load_manifest;
use affectfuse::run::{evaluate, render_run_dir, PartialConfig, RunConfig};
use affectfuse::synth::{synthesize, SynthConfig};
use affectfuse::RayonExecutor;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Music emotion recognition from EEG and musical content.
///
/// Log verbosity follows RUST_LOG (default: info).
#[derive(Parser)]
#[command(name = "affectfuse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded demo dataset with known class structure.
    Synth(SynthArgs),
    /// Extract EEG and music feature tables for every trial of a manifest.
    Extract(ExtractArgs),
    /// Cross-validate classifiers and write reports into a run directory.
    Evaluate(EvaluateArgs),
    /// Print the tables of an existing run directory.
    Report(ReportArgs),
}

#[derive(Args)]
struct SynthArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    subjects: usize,
    /// Songs per subject.
    #[arg(long, default_value_t = 4)]
    trials: usize,
    /// Length of every song, seconds.
    #[arg(long, default_value_t = 30.0)]
    duration: f64,
}

#[derive(Args, Clone)]
struct FeatureArgs {
    /// Feature cache root (default: `features/` next to the manifest).
    #[arg(long)]
    features: Option<PathBuf>,
    /// Hop between windows, seconds (default: the window length).
    #[arg(long)]
    hop: Option<f64>,
    /// Largest Higuchi delay.
    #[arg(long)]
    k_max: Option<usize>,
    /// Band-pass the EEG before windowing, e.g. `--bandpass 0.5,60`.
    #[arg(long, value_name = "LOW,HIGH", value_parser = parse_band)]
    bandpass: Option<[f64; 2]>,
    /// STFT frame length in samples (power of two).
    #[arg(long)]
    frame_len: Option<usize>,
    /// STFT hop in samples.
    #[arg(long)]
    frame_hop: Option<usize>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Window lengths in seconds; `--windows 2,3` or the full sweep with `--sweep-windows`.
    #[arg(long, value_delimiter = ',', default_value = "2", conflicts_with = "sweep_windows")]
    windows: Vec<f64>,
    #[arg(long)]
    sweep_windows: bool,
    #[command(flatten)]
    features: FeatureArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    SubjectDependent,
    Loso,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModalityArg {
    Eeg,
    Mf,
    Dlf,
    Flf,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Arousal,
    Valence,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormalizationArg {
    /// Scaler fitted on training rows only.
    Split,
    /// Scaler fitted on all rows of the scope (leaks test statistics).
    Whole,
}

#[derive(Clone, Copy, ValueEnum)]
enum FoldArg {
    Stratified,
    BySong,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Dataset manifest (may also come from the config file).
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Run directory for the outputs.
    #[arg(long)]
    out: PathBuf,
    /// TOML config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Window length, seconds.
    #[arg(long, conflicts_with = "sweep_windows")]
    window: Option<f64>,
    /// Evaluate every window length from 2 to 10 s.
    #[arg(long, conflicts_with = "sweep_alpha")]
    sweep_windows: bool,
    /// EEG weight for decision-level fusion.
    #[arg(long, conflicts_with = "sweep_alpha")]
    alpha: Option<f64>,
    /// Evaluate fusion weights 0, 0.025, ..., 1.
    #[arg(long)]
    sweep_alpha: bool,
    #[arg(long, value_enum)]
    protocol: Option<ProtocolArg>,
    #[arg(long, value_enum)]
    modality: Option<ModalityArg>,
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    #[arg(long, value_enum)]
    normalization: Option<NormalizationArg>,
    #[arg(long, value_enum)]
    folds_by: Option<FoldArg>,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Permute labels within each subject (negative control).
    #[arg(long)]
    shuffle_labels: bool,
    #[command(flatten)]
    features: FeatureArgs,
}

#[derive(Args)]
struct ReportArgs {
    /// Run directory written by `evaluate`.
    #[arg(long)]
    run: PathBuf,
}

fn executor(jobs: Option<usize>) -> Result<RayonExecutor> {
    let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    RayonExecutor::new(jobs).context("building the worker pool")
}

fn print_outcome(window_s: f64, t: &TrialOutcome) {
    match t.status {
        CacheStatus::Cached => println!("[{window_s} s] {}: skipped (cached)", t.trial_id),
        CacheStatus::Extracted => println!("[{window_s} s] {}: extracted {} windows", t.trial_id, t.windows),
    }
}

fn parse_band(s: &str) -> Result<[f64; 2], String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LOW,HIGH in Hz")?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok([num(lo)?, num(hi)?])
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    let cfg = SynthConfig {
        seed: a.seed,
        subjects: a.subjects,
        trials: a.trials,
        duration_s: a.duration,
    };
    if cfg.subjects == 0 || cfg.trials == 0 || !(cfg.duration_s >= 2.0) {
        bail!("need at least one subject, one trial and 2 s of signal");
    }
    let out = synthesize(&cfg, &a.out)?;
    println!(
        "wrote {} subjects x {} songs to {}",
        cfg.subjects,
        cfg.trials,
        out.manifest_path.display()
    );
    Ok(())
}

fn cmd_extract(a: ExtractArgs) -> Result<()> {
    let manifest = load_manifest(&a.manifest)?;
    let partial = PartialConfig {
        manifest: Some(a.manifest.clone()),
        features_dir: a.features.features.clone(),
        hop_s: a.features.hop,
        k_max: a.features.k_max,
        bandpass: a.features.bandpass,
        frame_len: a.features.frame_len,
        frame_hop: a.features.frame_hop,
        ..Default::default()
    };
    let cfg = RunConfig::resolve(partial)?;
    let exec = executor(a.features.jobs)?;
    let windows = if a.sweep_windows {
        affectfuse::core::eval::WINDOW_SIZES_S.to_vec()
    } else {
        a.windows
    };
    for w in windows {
        let settings: ExtractSettings = cfg.extract_settings(w);
        let (_, outcomes) = extract_dataset(&manifest, &cfg.features_dir, &settings, &exec)?;
        for t in &outcomes {
            print_outcome(w, t);
        }
    }
    Ok(())
}

fn cmd_evaluate(a: EvaluateArgs) -> Result<()> {
    let file = match &a.config {
        Some(p) => PartialConfig::load(p)?,
        None => PartialConfig::default(),
    };
    let flags = PartialConfig {
        manifest: a.manifest,
        features_dir: a.features.features.clone(),
        seed: a.seed,
        protocol: a.protocol.map(|p| match p {
            ProtocolArg::SubjectDependent => Protocol::SubjectDependent,
            ProtocolArg::Loso => Protocol::LeaveOneSubjectOut,
        }),
        modality: a.modality.map(|m| match m {
            ModalityArg::Eeg => EvalModality::Eeg,
            ModalityArg::Mf => EvalModality::Mf,
            ModalityArg::Dlf => EvalModality::Dlf,
            ModalityArg::Flf => EvalModality::Flf,
        }),
        targets: a.target.map(|t| match t {
            TargetArg::Arousal => vec![Target::Arousal],
            TargetArg::Valence => vec![Target::Valence],
            TargetArg::Both => Target::BOTH.to_vec(),
        }),
        window_s: a.window,
        hop_s: a.features.hop,
        sweep_windows: a.sweep_windows.then_some(true),
        alpha: a.alpha,
        sweep_alpha: a.sweep_alpha.then_some(true),
        folds: a.folds,
        repetitions: a.repetitions,
        normalization: a.normalization.map(|n| match n {
            NormalizationArg::Split => NormalizationMode::SplitRespecting,
            NormalizationArg::Whole => NormalizationMode::WholeScope,
        }),
        fold_mode: a.folds_by.map(|f| match f {
            FoldArg::Stratified => FoldMode::Stratified,
            FoldArg::BySong => FoldMode::GroupedBySong,
        }),
        shuffle_labels: a.shuffle_labels.then_some(true),
        k_max: a.features.k_max,
        bandpass: a.features.bandpass,
        frame_len: a.features.frame_len,
        frame_hop: a.features.frame_hop,
        ..Default::default()
    };
    // A sweep flag on the command line overrides a fixed value from the file.
    let mut file = file;
    if a.sweep_windows {
        file.sweep_alpha = None;
    }
    if a.sweep_alpha {
        file.sweep_windows = None;
    }
    let cfg = RunConfig::resolve(file.overlay(flags))?;
    let exec = executor(a.features.jobs)?;
    log::info!("evaluating with {} worker threads", exec.threads());
    let summary = evaluate(&cfg, &a.out, &exec, print_outcome)?;
    print!("{}", summary.text);
    for f in &summary.files {
        log::info!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Report(a) => render_run_dir(&a.run).map(|t| print!("{t}")).map_err(Into::into),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
