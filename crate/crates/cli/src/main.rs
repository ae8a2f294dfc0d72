//! `heatbench`: seeds a temperature field, runs the configured solver
//! variants over timed series, optionally verifies cross-variant
//! bit-equality first, and prints a report to stdout.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/configuration
//! error.

use std::process::ExitCode;
use std::str::FromStr;
use std::thread;

use clap::Parser;

use heatbench::{
    emit_report, time_variant, verify_all, BenchConfig, Report, ReportFormat, ReportMeta, Variant,
    VerifyReport,
};

/// Variant selector: one concrete variant or all of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VariantArg {
    All,
    One(Variant),
}

impl FromStr for VariantArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(VariantArg::All)
        } else {
            Variant::from_str(s).map(VariantArg::One)
        }
    }
}

impl VariantArg {
    fn expand(self) -> Vec<Variant> {
        match self {
            VariantArg::All => Variant::ALL.to_vec(),
            VariantArg::One(v) => vec![v],
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "heatbench",
    about = "Gauss-Seidel heat-equation benchmark: sequential oracle, actor wavefront, and even/odd data-parallel solvers",
    version
)]
struct Args {
    /// Grid height H (at least 3)
    #[arg(long)]
    h: usize,

    /// Grid width W (default: 2*H)
    #[arg(long)]
    w: Option<usize>,

    /// Time steps T (default: 2*H)
    #[arg(long)]
    t: Option<usize>,

    /// Solver variant to run: seq, wavefront, dataparallel, or all
    #[arg(long, default_value = "all")]
    variant: VariantArg,

    /// Worker threads for the parallel solvers
    /// (default: available hardware threads)
    #[arg(long)]
    workers: Option<usize>,

    /// Timed runs per series (one untimed warm-up precedes each series)
    #[arg(long, default_value_t = 19)]
    runs: usize,

    /// PRNG seed for the initial field
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Report format: json, csv, or markdown
    #[arg(long, default_value = "markdown")]
    format: ReportFormat,

    /// Verify cross-variant bit-equality before timing
    /// (requires at least two variants)
    #[arg(long)]
    verify: bool,
}

fn hardware_threads() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

fn config_from(args: &Args) -> BenchConfig {
    let mut cfg = BenchConfig::new(args.h);
    if let Some(w) = args.w {
        cfg.w = w;
    }
    if let Some(t) = args.t {
        cfg.t_max = t;
    }
    cfg.workers = args.workers.unwrap_or_else(hardware_threads);
    cfg.runs = args.runs;
    cfg.seed = args.seed;
    cfg.variants = args.variant.expand();
    cfg.verify = args.verify;
    cfg
}

/// Renders the verification outcome as human-readable diagnostics.
/// Returns the text and whether every check passed.
fn render_verification(report: &VerifyReport) -> (String, bool) {
    let mut text = String::new();
    for check in &report.variants {
        text.push_str(&format!(
            "verify: {} ops {}/{} resends {}: {}\n",
            check.variant,
            check.ops,
            check.expected_ops,
            check.resend_events,
            if check.passed() { "ok" } else { "FAILED" }
        ));
    }
    for pair in &report.pairs {
        match pair.first_diff {
            None => text.push_str(&format!("verify: {} vs {}: ok\n", pair.a, pair.b)),
            Some((i, j)) => text.push_str(&format!(
                "verify: {} vs {}: FAILED, fields first differ at cell ({i}, {j})\n",
                pair.a, pair.b
            )),
        }
    }
    (text, report.passed())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = config_from(&args);
    if let Err(e) = cfg.validate() {
        eprintln!("heatbench: {e}");
        return ExitCode::from(2);
    }

    if cfg.verify {
        match verify_all(&cfg) {
            Ok(report) => {
                let (text, passed) = render_verification(&report);
                eprint!("{text}");
                if !passed {
                    return ExitCode::from(1);
                }
            }
            Err(e) => {
                eprintln!("heatbench: {e}");
                return ExitCode::from(2);
            }
        }
    }

    let stats: Vec<_> = cfg
        .variants
        .iter()
        .map(|&v| time_variant(&cfg, v))
        .collect();
    let meta = ReportMeta {
        h: cfg.h,
        w: cfg.w,
        t_max: cfg.t_max,
        workers: cfg.workers,
        runs: cfg.runs,
        seed: cfg.seed,
        warmup: true,
        hardware_threads: hardware_threads(),
    };
    let report = Report::from_stats(meta, &stats);
    print!("{}", emit_report(&report, args.format));
    ExitCode::SUCCESS
}

#[cfg(test)]
mod tests {
    use super::*;
    use heatbench::{PairCheck, VariantCheck};

    #[test]
    fn variant_argument_parses() {
        assert_eq!("all".parse(), Ok(VariantArg::All));
        assert_eq!("seq".parse(), Ok(VariantArg::One(Variant::Seq)));
        assert_eq!("wavefront".parse(), Ok(VariantArg::One(Variant::Wavefront)));
        assert!("everything".parse::<VariantArg>().is_err());
        assert_eq!(VariantArg::All.expand(), Variant::ALL.to_vec());
        assert_eq!(
            VariantArg::One(Variant::Dataparallel).expand(),
            vec![Variant::Dataparallel]
        );
    }

    #[test]
    fn verification_rendering_reports_failures() {
        let report = VerifyReport {
            variants: vec![VariantCheck {
                variant: Variant::Wavefront,
                ops: 16,
                expected_ops: 16,
                resend_events: 0,
            }],
            pairs: vec![PairCheck {
                a: Variant::Seq,
                b: Variant::Wavefront,
                first_diff: Some((2, 3)),
            }],
        };
        let (text, passed) = render_verification(&report);
        assert!(!passed);
        assert!(text.contains("FAILED, fields first differ at cell (2, 3)"));
        assert!(text.contains("wavefront ops 16/16 resends 0: ok"));

        let ok = VerifyReport {
            variants: vec![],
            pairs: vec![PairCheck {
                a: Variant::Seq,
                b: Variant::Dataparallel,
                first_diff: None,
            }],
        };
        let (text, passed) = render_verification(&ok);
        assert!(passed);
        assert!(text.contains("seq vs dataparallel: ok"));
    }
}
