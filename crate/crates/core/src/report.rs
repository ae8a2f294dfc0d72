//! Benchmark report assembly and emission. One report carries reproducibility
//! metadata, a row per timed variant, and a relative-efficiency section when
//! both parallel variants are present. Emitters: JSON (machine), CSV
//! (machine, `#`-prefixed metadata header), Markdown (human tables).

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::harness::{RunStats, Variant};
use crate::stats::relative_efficiency;

/// Output formats for [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Markdown,
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "markdown",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "markdown" => Ok(ReportFormat::Markdown),
            other => Err(format!(
                "unknown format '{other}' (expected json, csv or markdown)"
            )),
        }
    }
}

/// Reproducibility metadata attached to every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub h: usize,
    pub w: usize,
    pub t_max: usize,
    pub workers: usize,
    pub runs: usize,
    pub seed: u64,
    /// Whether each series was preceded by one untimed warm-up run.
    pub warmup: bool,
    /// Hardware threads available on the measuring machine.
    pub hardware_threads: usize,
}

/// One timed variant: the series summary in report shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub h: usize,
    pub variant: String,
    /// Significant-digit summary value of the series.
    pub reported: f64,
    /// Decimal places of `reported`; absent for zero-spread series.
    pub decimals: Option<u32>,
    pub min: f64,
    pub max: f64,
    pub runs: usize,
}

/// Relative efficiency `100 * t_numerator / t_denominator`, 2 significant
/// figures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyRow {
    pub numerator: String,
    pub denominator: String,
    pub percent: f64,
}

/// A complete benchmark report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: ReportMeta,
    pub rows: Vec<ReportRow>,
    pub efficiency: Vec<EfficiencyRow>,
}

impl Report {
    /// Assembles a report from timed series. When both parallel variants
    /// are present, adds the efficiency row
    /// `100 * t_dataparallel / t_wavefront`.
    pub fn from_stats(meta: ReportMeta, stats: &[RunStats]) -> Report {
        let rows = stats
            .iter()
            .map(|s| ReportRow {
                h: meta.h,
                variant: s.variant.to_string(),
                reported: s.summary.reported,
                decimals: s.summary.decimals,
                min: s.summary.min,
                max: s.summary.max,
                runs: s.times_s.len(),
            })
            .collect();
        let reported_of = |v: Variant| {
            stats
                .iter()
                .find(|s| s.variant == v)
                .map(|s| s.summary.reported)
        };
        let mut efficiency = Vec::new();
        if let (Some(dp), Some(wf)) = (
            reported_of(Variant::Dataparallel),
            reported_of(Variant::Wavefront),
        ) {
            efficiency.push(EfficiencyRow {
                numerator: Variant::Dataparallel.to_string(),
                denominator: Variant::Wavefront.to_string(),
                percent: relative_efficiency(dp, wf),
            });
        }
        Report {
            meta,
            rows,
            efficiency,
        }
    }
}

/// Renders `report` in the requested format. Serialization is deterministic;
/// JSON and CSV round-trip all numeric fields exactly (shortest-round-trip
/// float formatting).
pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut out =
                serde_json::to_string_pretty(report).expect("report serialization cannot fail");
            out.push('\n');
            out
        }
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Markdown => emit_markdown(report),
    }
}

fn meta_pairs(meta: &ReportMeta) -> String {
    format!(
        "h={} w={} t_max={} workers={} runs={} seed={} warmup={} hardware_threads={}",
        meta.h,
        meta.w,
        meta.t_max,
        meta.workers,
        meta.runs,
        meta.seed,
        meta.warmup,
        meta.hardware_threads
    )
}

fn emit_csv(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", meta_pairs(&report.meta));
    let _ = writeln!(out, "h,variant,reported,min,max,runs");
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.h, row.variant, row.reported, row.min, row.max, row.runs
        );
    }
    if !report.efficiency.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "numerator,denominator,percent");
        for e in &report.efficiency {
            let _ = writeln!(out, "{},{},{}", e.numerator, e.denominator, e.percent);
        }
    }
    out
}

/// Reported value at its significant precision (e.g. `0.42`), full
/// precision when no digit count applies.
fn format_reported(value: f64, decimals: Option<u32>) -> String {
    match decimals {
        Some(d) => format!("{value:.prec$}", prec = d as usize),
        None => format!("{value}"),
    }
}

fn emit_markdown(report: &Report) -> String {
    let meta = &report.meta;
    let mut out = String::new();
    let _ = writeln!(out, "# heatbench report");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "- grid: {} x {}, time steps: {}",
        meta.h, meta.w, meta.t_max
    );
    let _ = writeln!(
        out,
        "- workers: {}, runs per series: {}{}, seed: {}",
        meta.workers,
        meta.runs,
        if meta.warmup {
            " (plus 1 untimed warm-up)"
        } else {
            ""
        },
        meta.seed
    );
    let _ = writeln!(out, "- hardware threads: {}", meta.hardware_threads);
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "| H | variant | reported time (s) | min (s) | max (s) | runs |"
    );
    let _ = writeln!(
        out,
        "|--:|---------|------------------:|--------:|--------:|-----:|"
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            row.h,
            row.variant,
            format_reported(row.reported, row.decimals),
            row.min,
            row.max,
            row.runs
        );
    }
    if !report.efficiency.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "## Relative efficiency");
        let _ = writeln!(out);
        let _ = writeln!(out, "| numerator | denominator | E (%) |");
        let _ = writeln!(out, "|-----------|-------------|------:|");
        for e in &report.efficiency {
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                e.numerator, e.denominator, e.percent
            );
        }
    }
    out
}
