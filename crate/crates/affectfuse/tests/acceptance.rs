//! Acceptance criteria 1-9. Every test writes one `[criterion N] PASS|FAIL` line
//! straight to stderr, so the verdicts show up even with captured output.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use affectfuse::core::dataset::{resample_annotations, AnnotationEvent, AnnotationStream, AudioSignal};
use affectfuse::core::eeg::higuchi_fd;
use affectfuse::core::eval::{
    chance_level, mcc, scale_split, stratified_kfold, ConfusionMatrix, EvaluationReport,
    NormalizationMode, SweepTable, Target,
};
use affectfuse::core::fusion::{decide_p, fuse_probability, Class};
use affectfuse::core::music::{
    analyze_frames, extract_music_features, hcdf_mean, key_clarity_mode, rms_mean, roughness_mean,
    tempo_estimate, zero_crossing_rate, FrameConfig, MAJOR_PROFILE,
};
use affectfuse::core::seed;
use affectfuse::core::svm::{train_with_report, Classifier, SvmParams, TrainingSet};
use affectfuse::formats::{load_annotations, write_annotations};
use rand::{rngs::StdRng, Rng, SeedableRng};
use rand_distr::StandardNormal;
use serde_json::Value;

fn verdict(n: u32, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[criterion {n}] {tag} {detail}");
}

/// Collects named checks; reports and asserts once at the end.
struct Checks {
    n: u32,
    failures: Vec<String>,
    started: Instant,
}

impl Checks {
    fn new(n: u32) -> Self {
        Self {
            n,
            failures: Vec::new(),
            started: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(mut self, budget: Option<Duration>, detail: &str) {
        let elapsed = self.started.elapsed();
        if let Some(b) = budget {
            self.check(elapsed < b, format!("runtime {elapsed:.2?} over {b:?}"));
        }
        let detail = format!("{detail} ({elapsed:.2?})");
        if self.failures.is_empty() {
            verdict(self.n, true, &detail);
        } else {
            verdict(self.n, false, &format!("{detail}: {}", self.failures.join("; ")));
            panic!("criterion {} failed: {:?}", self.n, self.failures);
        }
    }
}

fn gaussian(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

fn cumulative(x: Vec<f64>) -> Vec<f64> {
    x.into_iter()
        .scan(0.0, |s, v| {
            *s += v;
            Some(*s)
        })
        .collect()
}

/// Curve lengths straight from the definition (1-based), slope by least squares.
fn higuchi_oracle(x: &[f64], k_max: usize) -> f64 {
    let n = x.len();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 1..=k_max {
        let mut total = 0.0;
        for m in 1..=k {
            let count = (n - m) / k;
            let s: f64 = (1..=count).map(|i| (x[m + i * k - 1] - x[m + (i - 1) * k - 1]).abs()).sum();
            total += s * (n as f64 - 1.0) / (count * k * k) as f64;
        }
        xs.push((1.0 / k as f64).ln());
        ys.push((total / k as f64).ln());
    }
    let c = k_max as f64;
    let (sx, sy): (f64, f64) = (xs.iter().sum(), ys.iter().sum());
    let sxy: f64 = xs.iter().zip(&ys).map(|(a, b)| a * b).sum();
    let sxx: f64 = xs.iter().map(|a| a * a).sum();
    (c * sxy - sx * sy) / (c * sxx - sx * sx)
}

#[test]
fn criterion_1_fractal_dimension() {
    let mut c = Checks::new(1);
    let ramp: Vec<f64> = (0..1000).map(|i| 0.05 * i as f64 + 3.0).collect();
    let fd_ramp = higuchi_fd(&ramp, 32).unwrap();
    c.check((fd_ramp - 1.0).abs() <= 0.01, format!("ramp {fd_ramp}"));

    let mut worst_noise = (f64::INFINITY, f64::NEG_INFINITY);
    let mut worst_walk = 0.0f64;
    for s in 0..10 {
        let fd = higuchi_fd(&gaussian(s, 1000), 32).unwrap();
        worst_noise = (worst_noise.0.min(fd), worst_noise.1.max(fd));
        let fd = higuchi_fd(&cumulative(gaussian(50 + s, 1000)), 32).unwrap();
        worst_walk = worst_walk.max((fd - 1.5).abs());
    }
    c.check(worst_noise.0 >= 1.90 && worst_noise.1 <= 2.05, format!("white noise {worst_noise:?}"));
    c.check(worst_walk <= 0.1, format!("random walk off by {worst_walk}"));

    let mut rng = StdRng::seed_from_u64(77);
    let mut max_diff = 0.0f64;
    for i in 0..100 {
        let n = rng.random_range(100..600);
        let x = if i % 2 == 0 { gaussian(1000 + i, n) } else { cumulative(gaussian(1000 + i, n)) };
        max_diff = max_diff.max((higuchi_fd(&x, 32).unwrap() - higuchi_oracle(&x, 32)).abs());
    }
    c.check(max_diff <= 1e-9, format!("oracle diff {max_diff:e}"));
    c.finish(
        Some(Duration::from_secs(5)),
        &format!("ramp {fd_ramp:.4}, noise {:.3}..{:.3}, walk |d| {worst_walk:.3}, oracle {max_diff:.1e}", worst_noise.0, worst_noise.1),
    );
}

const SR: f64 = 44_100.0;

fn tone(parts: &[(f64, f64)], seconds: f64) -> AudioSignal {
    let x = (0..(seconds * SR) as usize)
        .map(|i| {
            let t = i as f64 / SR;
            parts.iter().map(|(f, a)| a * (2.0 * PI * f * t).sin()).sum()
        })
        .collect();
    AudioSignal::new(x, SR).unwrap()
}

fn clicks(bpm: f64, seconds: f64) -> AudioSignal {
    let n = (seconds * SR) as usize;
    let mut rng = StdRng::seed_from_u64(11);
    let mut x = vec![0.0; n];
    let mut at = 0.1 * SR;
    while (at as usize) < n {
        let s = at as usize;
        for j in 0..441.min(n - s) {
            x[s + j] = 0.9 * (-(j as f64) / 80.0).exp() * (2.0 * rng.random::<f64>() - 1.0);
        }
        at += 60.0 / bpm * SR;
    }
    AudioSignal::new(x, SR).unwrap()
}

#[test]
fn criterion_2_music_features() {
    let mut c = Checks::new(2);
    let cfg = FrameConfig::default();
    for amp in [0.3, 0.8] {
        let rms = rms_mean(&analyze_frames(&tone(&[(441.0, amp)], 2.0), &cfg).unwrap());
        c.check((rms - amp / 2f64.sqrt()).abs() <= 1e-3, format!("rms {rms} for amplitude {amp}"));
    }
    for f in [441.0, 1500.0] {
        let zcr = zero_crossing_rate(&tone(&[(f, 0.6)], 2.0), &cfg).unwrap();
        let expected = 2.0 * f / SR;
        c.check((zcr - expected).abs() <= 0.05 * expected, format!("zcr {zcr} vs {expected}"));
    }

    let mut rng = StdRng::seed_from_u64(4);
    let quiet: Vec<f64> = tone(&[(261.63, 0.1), (329.63, 0.1), (392.0, 0.1)], 2.0)
        .samples()
        .iter()
        .map(|v| v + 0.05 * (2.0 * rng.random::<f64>() - 1.0))
        .collect();
    let loud: Vec<f64> = quiet.iter().map(|v| 2.5 * v).collect();
    let a = extract_music_features(&AudioSignal::new(quiet, SR).unwrap(), &cfg).unwrap().vector;
    let b = extract_music_features(&AudioSignal::new(loud, SR).unwrap(), &cfg).unwrap().vector;
    let gain_diff = a
        .mfcc
        .iter()
        .zip(&b.mfcc)
        .chain(a.dmfcc.iter().zip(&b.dmfcc))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    c.check(gain_diff <= 1e-6, format!("cepstral gain difference {gain_diff:e}"));

    let mut tempos = Vec::new();
    for bpm in [120.0, 90.0] {
        let est = tempo_estimate(&analyze_frames(&clicks(bpm, 8.0), &cfg).unwrap()).unwrap();
        c.check(!est.no_onsets && (est.bpm - bpm).abs() <= 3.0, format!("{bpm} BPM read as {}", est.bpm));
        tempos.push(est.bpm);
    }

    let pure = roughness_mean(&analyze_frames(&tone(&[(440.0, 0.5)], 2.0), &cfg).unwrap());
    c.check(pure == 0.0, format!("pure tone roughness {pure}"));
    // Resolving partials 20 Hz apart needs a longer frame than the default.
    let long = FrameConfig { frame_len: 8192, hop: 4096 };
    let near = roughness_mean(&analyze_frames(&tone(&[(440.0, 0.4), (460.0, 0.4)], 2.0), &long).unwrap());
    let octave = roughness_mean(&analyze_frames(&tone(&[(440.0, 0.4), (880.0, 0.4)], 2.0), &long).unwrap());
    c.check(near > octave, format!("roughness 440+460 {near} vs 440+880 {octave}"));

    let key = key_clarity_mode(&MAJOR_PROFILE);
    c.check((key.key_clarity - 1.0).abs() < 1e-12 && key.mode > 0.0, format!("{key:?}"));
    let chord = [0.4, 0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0];
    let hcdf = hcdf_mean(&vec![chord; 20]);
    c.check(hcdf == 0.0, format!("constant chroma HCDF {hcdf}"));

    c.finish(
        Some(Duration::from_secs(30)),
        &format!(
            "mfcc gain {gain_diff:.1e}, tempo {:.1}/{:.1} BPM, roughness {near:.4} > {octave:.4}, clarity {:.3} mode {:.3}",
            tempos[0], tempos[1], key.key_clarity, key.mode
        ),
    );
}

fn blobs(seed: u64, n: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = StdRng::seed_from_u64(seed);
    let labels: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let rows = labels
        .iter()
        .map(|y| (0..dim).map(|_| 0.5 * y + rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    (rows, labels)
}

#[test]
fn criterion_3_kernel_machine() {
    let mut c = Checks::new(3);

    // Two points at +-1: symmetric multipliers 1 / (1 - K), zero bias.
    let pair = TrainingSet::new(&[vec![1.0], vec![-1.0]], &[1.0, -1.0]).unwrap();
    let k = (-4.0f64 / 9.0).exp();
    let params = SvmParams { c: 100.0, ..SvmParams::default() };
    let (model, report) = train_with_report(&pair, &params).unwrap();
    let alpha_err = report.alphas.iter().map(|a| (a - 1.0 / (1.0 - k)).abs()).fold(0.0, f64::max);
    let f_err = (model.decision_value(&[1.0]) - 1.0).abs().max((model.decision_value(&[-1.0]) + 1.0).abs());
    c.check(alpha_err <= 1e-6 && model.bias.abs() <= 1e-6 && f_err <= 1e-6, format!("two-point alpha {alpha_err:e}, f {f_err:e}, b {}", model.bias));

    let (mut worst_kkt, mut worst_balance) = (0.0f64, 0.0f64);
    for s in 0..20 {
        let (rows, labels) = blobs(s, 60, 4);
        let params = SvmParams { seed: s, ..SvmParams::default() };
        let (model, report) = train_with_report(&TrainingSet::new(&rows, &labels).unwrap(), &params).unwrap();
        c.check(model.converged, format!("seed {s} did not converge"));
        let mut balance = 0.0;
        for (t, &a) in report.alphas.iter().enumerate() {
            balance += a * labels[t];
            let margin = labels[t] * model.decision_value(&rows[t]);
            let residual = if a <= 0.0 {
                (1.0 - margin).max(0.0)
            } else if a >= params.c {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            };
            worst_kkt = worst_kkt.max(residual);
        }
        worst_balance = worst_balance.max(balance.abs());
    }
    c.check(worst_kkt < 1e-3, format!("KKT residual {worst_kkt:e}"));
    c.check(worst_balance <= 1e-8, format!("sum alpha y {worst_balance:e}"));

    let mut worst_flip = 0.0f64;
    for s in 0..5 {
        let (rows, labels) = blobs(200 + s, 50, 3);
        let flipped: Vec<f64> = labels.iter().map(|y| -y).collect();
        let params = SvmParams { seed: s, ..SvmParams::default() };
        let a = train_with_report(&TrainingSet::new(&rows, &labels).unwrap(), &params).unwrap().0;
        let b = train_with_report(&TrainingSet::new(&rows, &flipped).unwrap(), &params).unwrap().0;
        for x in &rows {
            worst_flip = worst_flip.max((a.decision_value(x) + b.decision_value(x)).abs());
        }
    }
    c.check(worst_flip <= 1e-8, format!("label flip {worst_flip:e}"));

    let (rows, labels) = blobs(9, 80, 5);
    let data = TrainingSet::new(&rows, &labels).unwrap();
    let params = SvmParams { seed: 42, ..SvmParams::default() };
    let (m1, m2) = (Classifier::fit(&data, &params).unwrap(), Classifier::fit(&data, &params).unwrap());
    let bits = |m: &Classifier| {
        let mut v: Vec<u64> = m.model.dual_coef.iter().map(|x| x.to_bits()).collect();
        v.push(m.model.bias.to_bits());
        v.extend(m.model.support_vectors.iter().flatten().map(|x| x.to_bits()));
        v
    };
    c.check(bits(&m1) == bits(&m2) && m1 == m2, "fixed seed models differ");

    c.finish(
        None,
        &format!("two-point {alpha_err:.1e}, KKT {worst_kkt:.1e}, balance {worst_balance:.1e}, flip {worst_flip:.1e}, bit-identical"),
    );
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn criterion_4_metrics() {
    let mut c = Checks::new(4);
    let perfect = mcc(&ConfusionMatrix::new(7, 5, 0, 0));
    let inverted = mcc(&ConfusionMatrix::new(0, 0, 5, 7));
    c.check(perfect == 1.0 && inverted == -1.0, format!("perfect {perfect}, inverted {inverted}"));
    let reference = mcc(&ConfusionMatrix::new(6, 3, 1, 2));
    c.check((reference - 0.4781).abs() <= 1e-4, format!("MCC(6,3,1,2) {reference}"));
    let zero = mcc(&ConfusionMatrix::new(5, 0, 3, 0));
    c.check(zero == 0.0, format!("zero factor {zero}"));

    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut compared = 0;
    for _ in 0..1000 {
        let [tp, tn, fp, fn_] = [0; 4].map(|_: u64| rng.random_range(0..30u64));
        let m = mcc(&ConfusionMatrix::new(tp, tn, fp, fn_));
        let mut truth = Vec::new();
        let mut pred = Vec::new();
        for (count, t, p) in [(tp, 1.0, 1.0), (tn, 0.0, 0.0), (fp, 0.0, 1.0), (fn_, 1.0, 0.0)] {
            truth.extend(std::iter::repeat_n(t, count as usize));
            pred.extend(std::iter::repeat_n(p, count as usize));
        }
        let r = pearson(&truth, &pred);
        if r.is_finite() {
            worst = worst.max((m - r).abs());
            compared += 1;
        } else {
            c.check(m == 0.0, format!("degenerate matrix gave {m}"));
        }
    }
    c.check(worst <= 1e-9, format!("MCC vs Pearson {worst:e}"));
    let chance = chance_level(&[true, true, true, false]);
    c.check(chance == 75.0, format!("chance {chance}"));
    c.finish(
        None,
        &format!("MCC(6,3,1,2) = {reference:.4}, Pearson agreement {worst:.1e} over {compared} matrices, chance {chance}"),
    );
}

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_affectfuse"));
    cmd.env("RUST_LOG", "warn");
    cmd
}

fn cli(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Synthetic dataset plus two window sweeps and two alpha sweeps with one seed.
struct SweepRuns {
    _dir: tempfile::TempDir,
    windows: [PathBuf; 2],
    alphas: [PathBuf; 2],
    elapsed: Duration,
}

fn sweep_runs() -> &'static SweepRuns {
    static RUNS: OnceLock<SweepRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let start = Instant::now();
        let dir = tempfile::tempdir().unwrap();
        let data = dir.path().join("data");
        cli(&["synth", "--out", s(&data), "--seed", "21"]);
        let manifest = data.join("manifest.toml");
        let run = |name: &str, extra: &[&str]| {
            let out = dir.path().join(name);
            let mut args = vec!["evaluate", "--manifest", s(&manifest), "--out", s(&out), "--seed", "5", "--repetitions", "3"];
            args.extend_from_slice(extra);
            cli(&args);
            out
        };
        let windows = [run("w1", &["--sweep-windows"]), run("w2", &["--sweep-windows"])];
        let alphas = [
            run("a1", &["--sweep-alpha", "--window", "2"]),
            run("a2", &["--sweep-alpha", "--window", "2"]),
        ];
        SweepRuns {
            _dir: dir,
            windows,
            alphas,
            elapsed: start.elapsed(),
        }
    })
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).unwrap()).unwrap()
}

fn metric_fields(report: &Value) -> Value {
    let keys = ["accuracy_mean", "accuracy_std", "mcc_mean", "mcc_std", "chance_level", "per_repetition", "per_subject"];
    Value::Object(keys.iter().map(|k| (k.to_string(), report[*k].clone())).collect())
}

fn find_cell<'a>(table: &'a Value, target: &str, row: &str, axis: f64) -> &'a Value {
    table["cells"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["target"] == target && c["row"] == row && c["axis_value"].as_f64() == Some(axis))
        .map(|c| &c["report"])
        .unwrap_or_else(|| panic!("no cell {target}/{row}/{axis}"))
}

#[test]
fn criterion_5_decision_fusion() {
    let mut c = Checks::new(5);
    let mut rng = StdRng::seed_from_u64(5);
    let mut outside = 0;
    for _ in 0..100_000 {
        let (pe, pm, a) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
        let p = fuse_probability(pe, pm, a);
        if !(pe.min(pm) <= p && p <= pe.max(pm)) {
            outside += 1;
        }
    }
    c.check(outside == 0, format!("{outside} fused values outside their inputs"));

    let ones = (0..10_000u64)
        .filter(|&i| decide_p(0.5, seed::derive(17, &[i])) == Class::One)
        .count();
    let fraction = ones as f64 / 10_000.0;
    c.check((fraction - 0.5).abs() <= 0.02, format!("tie fraction {fraction}"));

    let runs = sweep_runs();
    let windows = read_json(&runs.windows[0].join("sweep_windows.json"));
    let alphas = read_json(&runs.alphas[0].join("sweep_alpha.json"));
    for target in ["arousal", "valence"] {
        for (alpha, row) in [(1.0, "EEG"), (0.0, "MF")] {
            let fused = serde_json::to_string(&metric_fields(find_cell(&alphas, target, "DLF", alpha))).unwrap();
            let single = serde_json::to_string(&metric_fields(find_cell(&windows, target, row, 2.0))).unwrap();
            c.check(fused == single, format!("{target}: alpha {alpha} differs from the {row} cell"));
        }
    }
    c.finish(None, &format!("0 of 1e5 outside the hull, tie fraction {fraction:.4}, endpoints byte-identical to unimodal cells"));
}

fn dlf_report(run: &Path, target: Target) -> EvaluationReport {
    let reports: Vec<EvaluationReport> = serde_json::from_slice(&fs::read(run.join("report.json")).unwrap()).unwrap();
    reports.into_iter().find(|r| r.target == target).unwrap()
}

#[test]
fn criterion_6_end_to_end() {
    let mut c = Checks::new(6);
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    cli(&["synth", "--out", s(&data), "--subjects", "4", "--trials", "8", "--seed", "1"]);
    let manifest = data.join("manifest.toml");
    let out = dir.path().join("run");
    cli(&["evaluate", "--manifest", s(&manifest), "--out", s(&out), "--seed", "1"]);

    let mut parts = Vec::new();
    for target in Target::BOTH {
        let r = dlf_report(&out, target);
        c.check(r.accuracy_mean >= 90.0, format!("{} DLF accuracy {:.2}", target.name(), r.accuracy_mean));
        c.check((r.chance_level - 50.0).abs() <= 5.0, format!("{} chance {:.2}", target.name(), r.chance_level));
        parts.push(format!("{} {:.2}% (chance {:.2})", target.name(), r.accuracy_mean, r.chance_level));
    }

    // Permuted labels: MCC averaged over several permutations.
    let mut shuffled = Vec::new();
    for k in 1..=5u32 {
        let out = dir.path().join(format!("shuffled{k}"));
        let seed = k.to_string();
        cli(&["evaluate", "--manifest", s(&manifest), "--out", s(&out), "--seed", &seed, "--shuffle-labels"]);
        let values: Vec<f64> = Target::BOTH.iter().map(|&t| dlf_report(&out, t).mcc_mean).collect();
        shuffled.push(values);
    }
    for (i, target) in Target::BOTH.iter().enumerate() {
        let values: Vec<f64> = shuffled.iter().map(|v| v[i]).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        c.check(mean.abs() <= 0.15, format!("{} shuffled MCC {mean:.3} from {values:.3?}", target.name()));
        parts.push(format!("{} shuffled MCC {mean:+.3} {values:.3?}", target.name()));
    }
    let elapsed = start.elapsed();
    c.check(elapsed < Duration::from_secs(300), format!("runtime {elapsed:?}"));
    c.finish(None, &parts.join(", "));
}

#[test]
fn criterion_7_sweep_tables() {
    let mut c = Checks::new(7);
    let runs = sweep_runs();

    let table: SweepTable = serde_json::from_slice(&fs::read(runs.windows[0].join("sweep_windows.json")).unwrap()).unwrap();
    let sizes: Vec<f64> = (2..=10).map(f64::from).collect();
    c.check(table.axis_values == sizes, format!("window sizes {:?}", table.axis_values));
    c.check(table.rows == ["DLF_EEG", "DLF_MF", "EEG", "MF", "Chance"], format!("rows {:?}", table.rows));
    c.check(table.cells.len() == 90, format!("{} window cells", table.cells.len()));
    let complete = Target::BOTH.iter().all(|&t| {
        sizes.iter().all(|&w| table.rows.iter().all(|r| table.cell(t, r, w).is_some()))
    });
    c.check(complete, "window grid has holes");
    for (row, alpha) in [("DLF_EEG", 0.55), ("DLF_MF", 0.45)] {
        let a = table.cell(Target::Arousal, row, 2.0).and_then(|c| c.report.alpha);
        c.check(a == Some(alpha), format!("{row} weight {a:?}"));
    }

    let text = fs::read_to_string(runs.windows[0].join("table_windows.txt")).unwrap();
    let header_ok = text
        .lines()
        .filter(|l| l.starts_with("target"))
        .all(|l| l.split_whitespace().skip(2).collect::<Vec<_>>().chunks(2).map(|p| p.join(" ")).eq(sizes.iter().map(|w| format!("{w} s"))));
    let body = text.lines().filter(|l| l.starts_with("arousal") || l.starts_with("valence")).count();
    c.check(header_ok && body == 20, format!("window table layout: header ok {header_ok}, {body} body lines"));

    let alpha: SweepTable = serde_json::from_slice(&fs::read(runs.alphas[0].join("sweep_alpha.json")).unwrap()).unwrap();
    c.check(alpha.axis_values.len() == 41 && alpha.cells.len() == 82, format!("{} alpha points", alpha.axis_values.len()));
    c.check(alpha.axis_values.first() == Some(&0.0) && alpha.axis_values.last() == Some(&1.0), "alpha grid ends");
    let series = fs::read_to_string(runs.alphas[0].join("alpha_series.csv")).unwrap();
    c.check(series.lines().count() == 42, format!("{} alpha series lines", series.lines().count()));

    for (name, pair) in [("sweep_windows.json", &runs.windows), ("table_windows.txt", &runs.windows), ("sweep_alpha.json", &runs.alphas), ("alpha_series.csv", &runs.alphas)] {
        let same = fs::read(pair[0].join(name)).unwrap() == fs::read(pair[1].join(name)).unwrap();
        c.check(same, format!("{name} differs between runs"));
    }
    c.finish(None, &format!("9 x 5 x 2 window grid and 41-point alpha series, deterministic; four sweeps in {:.1?}", runs.elapsed));
}

#[test]
fn criterion_8_leakage_canary() {
    let mut c = Checks::new(8);
    // Column 0 grows with the index, so the largest row is out of range for any fold holding it.
    let rows: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64, ((i * 7) % 5) as f64]).collect();
    let labels: Vec<bool> = (0..50).map(|i| i % 2 == 1).collect();
    let folds = stratified_kfold(&labels, 10, 8).unwrap();
    let f = folds.folds.iter().position(|f| f.contains(&49)).unwrap();
    let train: Vec<&[f64]> = folds.train_indices(f).iter().map(|&i| rows[i].as_slice()).collect();
    let test: Vec<&[f64]> = folds.folds[f].iter().map(|&i| rows[i].as_slice()).collect();
    let at = folds.folds[f].iter().position(|&i| i == 49).unwrap();

    let (tr, te) = scale_split(&train, &test, NormalizationMode::SplitRespecting).unwrap();
    let canary = te[at][0];
    c.check(tr.iter().flatten().all(|v| (0.0..=1.0).contains(v)), "training rows outside [0, 1]");
    c.check(canary > 1.0, format!("split-respecting canary {canary}"));
    let (_, whole) = scale_split(&train, &test, NormalizationMode::WholeScope).unwrap();
    c.check(whole[at][0] == 1.0, format!("whole-scope canary {}", whole[at][0]));
    c.finish(None, &format!("held-out canary scales to {canary:.4} with training-only fit, 1.0 when test rows leak in"));
}

#[test]
fn criterion_9_annotation_round_trip() {
    let mut c = Checks::new(9);
    // Scripted 30 s pointer session: a sample every 40-120 ms along a spiral.
    let mut rng = StdRng::seed_from_u64(30);
    let mut events = Vec::new();
    let mut t = 0u64;
    while t <= 30_000 {
        let phase = t as f64 / 30_000.0;
        let v = (phase * (6.0 * PI * phase).cos() * 1.3).clamp(-1.0, 1.0);
        let a = (phase * (6.0 * PI * phase).sin() * 1.3).clamp(-1.0, 1.0);
        events.push(AnnotationEvent { t_ms: t, valence: v, arousal: a });
        t += rng.random_range(40..=120);
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("session.csv");
    write_annotations(&path, &AnnotationStream::new(events.clone()).unwrap()).unwrap();
    let loaded = load_annotations(&path).unwrap();
    c.check(loaded.events() == events.as_slice(), "events changed on disk");
    let exact = events.iter().all(|e| {
        resample_annotations(&loaded, e.t_ms as f64 / 1000.0).unwrap() == (e.valence, e.arousal)
    });
    c.check(exact, "resampled values differ at event timestamps");
    let bounded = loaded.events().iter().all(|e| e.valence.abs() <= 1.0 && e.arousal.abs() <= 1.0);
    c.check(bounded, "values outside [-1, 1]");
    c.finish(None, &format!("{} events over 30 s reload and resample exactly", events.len()));
}
