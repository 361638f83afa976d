//! Plain-text renderings of reports and sweeps.
//!
//! Window sweeps print one block per metric: a row per (target, row label)
//! and a column per window size, each entry `mean (std)`. Accuracies are
//! percentages. A `*` marks a cell that could not be computed.

use std::fmt::Write as _;

use affectfuse_core::eval::{EvaluationReport, Protocol, SweepTable, Target};

fn protocol_name(p: Protocol) -> &'static str {
    match p {
        Protocol::SubjectDependent => "subject-dependent",
        Protocol::LeaveOneSubjectOut => "leave-one-subject-out",
    }
}

fn acc_entry(r: &EvaluationReport) -> String {
    let mark = if r.flags.failed.is_some() { "*" } else { "" };
    format!("{:.2} ({:.2}){mark}", r.accuracy_mean, r.accuracy_std)
}

fn mcc_entry(r: &EvaluationReport) -> String {
    let mark = if r.flags.failed.is_some() { "*" } else { "" };
    format!("{:.3} ({:.3}){mark}", r.mcc_mean, r.mcc_std)
}

fn grid(head: &[String], rows: &[Vec<String>]) -> String {
    let cols = head.len();
    let width: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).chain([head[c].len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (c, cell) in cells.iter().enumerate() {
            if c > 0 {
                s.push_str("  ");
            }
            if c < 2 {
                let _ = write!(s, "{cell:<w$}", w = width[c]);
            } else {
                let _ = write!(s, "{cell:>w$}", w = width[c]);
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(head);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn failure_notes(reports: &[&EvaluationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        if let Some(reason) = &r.flags.failed {
            let _ = writeln!(
                out,
                "* {} {} {} s: {reason}",
                r.target.name(),
                r.modality,
                r.window_s
            );
        }
    }
    out
}

/// One line per report of a single-configuration run.
pub fn render_reports(reports: &[EvaluationReport]) -> String {
    let head: Vec<String> = ["target", "modality", "alpha", "window", "accuracy %", "mcc", "chance %"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.target.name().into(),
                r.modality.clone(),
                r.alpha.map_or("-".into(), |a| format!("{a}")),
                format!("{} s", r.window_s),
                acc_entry(r),
                mcc_entry(r),
                format!("{:.2} ({:.2})", r.chance_level, r.chance_std),
            ]
        })
        .collect();
    let protocol = reports.first().map_or("", |r| protocol_name(r.protocol));
    let mut out = format!("Protocol: {protocol}; mean (std) across subjects\n\n");
    out.push_str(&grid(&head, &rows));
    out.push_str(&failure_notes(&reports.iter().collect::<Vec<_>>()));
    out
}

fn sweep_block(table: &SweepTable, title: &str, entry: fn(&EvaluationReport) -> String) -> String {
    let mut head = vec!["target".to_string(), "row".to_string()];
    head.extend(table.axis_values.iter().map(|w| format!("{w} s")));
    let mut rows = Vec::new();
    for &target in &table.targets {
        for row in &table.rows {
            let mut cells = vec![target.name().to_string(), row.clone()];
            for &w in &table.axis_values {
                cells.push(table.cell(target, row, w).map_or("-".into(), |c| entry(&c.report)));
            }
            rows.push(cells);
        }
    }
    format!("{title}\n\n{}", grid(&head, &rows))
}

/// Accuracy and MCC blocks of a window-size sweep.
pub fn render_window_sweep(table: &SweepTable) -> String {
    let mut out = format!(
        "Window-size sweep, protocol: {}; mean (std) across subjects\n\n",
        protocol_name(table.protocol)
    );
    out.push_str(&sweep_block(table, "Accuracy (%)", acc_entry));
    out.push('\n');
    out.push_str(&sweep_block(table, "MCC", mcc_entry));
    out.push_str(&failure_notes(&table.cells.iter().map(|c| &c.report).collect::<Vec<_>>()));
    out
}

fn alpha_report(table: &SweepTable, target: Target, alpha: f64) -> Option<&EvaluationReport> {
    table
        .cells
        .iter()
        .find(|c| c.target == target && c.axis_value == alpha)
        .map(|c| &c.report)
}

/// One row per fusion weight, accuracy and MCC per target.
pub fn render_alpha_sweep(table: &SweepTable) -> String {
    let mut head = vec!["alpha".to_string(), String::new()];
    for t in &table.targets {
        head.push(format!("{} accuracy %", t.name()));
        head.push(format!("{} mcc", t.name()));
    }
    let rows: Vec<Vec<String>> = table
        .axis_values
        .iter()
        .map(|&a| {
            let mut cells = vec![format!("{a:.3}"), String::new()];
            for &t in &table.targets {
                match alpha_report(table, t, a) {
                    Some(r) => {
                        cells.push(acc_entry(r));
                        cells.push(mcc_entry(r));
                    }
                    None => cells.extend(["-".to_string(), "-".to_string()]),
                }
            }
            cells
        })
        .collect();
    let window = table.cells.first().map_or(0.0, |c| c.report.window_s);
    let mut out = format!(
        "Fusion-weight sweep (EEG weight alpha), window {window} s, protocol: {}\n\n",
        protocol_name(table.protocol)
    );
    out.push_str(&grid(&head, &rows));
    out.push_str(&failure_notes(&table.cells.iter().map(|c| &c.report).collect::<Vec<_>>()));
    out
}

/// `alpha,<target>_accuracy,<target>_accuracy_std,<target>_mcc,...` accuracies in percent.
pub fn alpha_series_csv(table: &SweepTable) -> String {
    let mut out = String::from("alpha");
    for t in &table.targets {
        let n = t.name();
        let _ = write!(out, ",{n}_accuracy,{n}_accuracy_std,{n}_mcc,{n}_mcc_std");
    }
    out.push('\n');
    for &a in &table.axis_values {
        out.push_str(&a.to_string());
        for &t in &table.targets {
            match alpha_report(table, t, a) {
                Some(r) => {
                    let _ = write!(out, ",{},{},{},{}", r.accuracy_mean, r.accuracy_std, r.mcc_mean, r.mcc_std);
                }
                None => out.push_str(",,,,"),
            }
        }
        out.push('\n');
    }
    out
}
