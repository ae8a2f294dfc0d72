//! Benchmark orchestration: configuration with derived defaults, seeded
//! field initialization, timed per-variant series, and cross-variant
//! verification against the sequential oracle.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::heat::{dataparallel_solve, first_difference, seq_solve, wavefront_solve, Field};
use crate::stats::{summarize, Summary};

/// Solver variants the harness can drive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Single-threaded oracle.
    Seq,
    /// Actor wavefront solver.
    Wavefront,
    /// Even/odd diagonal fork-join solver.
    Dataparallel,
}

impl Variant {
    /// All variants, in reporting order.
    pub const ALL: [Variant; 3] = [Variant::Seq, Variant::Wavefront, Variant::Dataparallel];

    /// Stable lowercase name used in CLI arguments and reports.
    pub fn name(self) -> &'static str {
        match self {
            Variant::Seq => "seq",
            Variant::Wavefront => "wavefront",
            Variant::Dataparallel => "dataparallel",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "seq" => Ok(Variant::Seq),
            "wavefront" => Ok(Variant::Wavefront),
            "dataparallel" => Ok(Variant::Dataparallel),
            other => Err(format!(
                "unknown variant '{other}' (expected seq, wavefront or dataparallel)"
            )),
        }
    }
}

/// Invalid benchmark configuration.
#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("grid height must be at least 3, got {0}")]
    HeightTooSmall(usize),
    #[error("grid width must be at least 3, got {0}")]
    WidthTooSmall(usize),
    #[error("time-step count must be at least 1")]
    NoTimeSteps,
    #[error("series length must be at least 1")]
    NoRuns,
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("at least one variant must be selected")]
    NoVariants,
    #[error("verification needs at least two variants, got {0}")]
    NotEnoughVariants(usize),
}

/// Benchmark configuration. `w` and `t_max` default to `2 * h`; the series
/// length defaults to 19 runs.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    /// Grid height H.
    pub h: usize,
    /// Grid width W.
    pub w: usize,
    /// Time steps T.
    pub t_max: usize,
    /// Worker threads P for the parallel variants.
    pub workers: usize,
    /// Timed runs per series.
    pub runs: usize,
    /// PRNG seed for the initial field.
    pub seed: u64,
    /// Variants to run, in order.
    pub variants: Vec<Variant>,
    /// Whether to verify cross-variant equality before timing.
    pub verify: bool,
}

impl BenchConfig {
    /// Configuration for height `h` with derived defaults: `w = 2h`,
    /// `t_max = 2h`, one worker, 19 runs, seed 42, all variants, no verify.
    pub fn new(h: usize) -> BenchConfig {
        BenchConfig {
            h,
            w: 2 * h,
            t_max: 2 * h,
            workers: 1,
            runs: 19,
            seed: 42,
            variants: Variant::ALL.to_vec(),
            verify: false,
        }
    }

    /// Validates every field range.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.h < 3 {
            return Err(ConfigError::HeightTooSmall(self.h));
        }
        if self.w < 3 {
            return Err(ConfigError::WidthTooSmall(self.w));
        }
        if self.t_max < 1 {
            return Err(ConfigError::NoTimeSteps);
        }
        if self.runs < 1 {
            return Err(ConfigError::NoRuns);
        }
        if self.workers < 1 {
            return Err(ConfigError::NoWorkers);
        }
        if self.variants.is_empty() {
            return Err(ConfigError::NoVariants);
        }
        if self.verify && self.variants.len() < 2 {
            return Err(ConfigError::NotEnoughVariants(self.variants.len()));
        }
        Ok(())
    }

    /// Row sweeps a correct solver performs: `(H-2) * T`.
    pub fn expected_ops(&self) -> u64 {
        (self.h as u64 - 2) * self.t_max as u64
    }
}

/// Fills an H x W field (every cell, boundary included) from a
/// seed-reproducible PRNG, uniform in [0, 1). The generator identity is
/// pinned: ChaCha8 seeded via `seed_from_u64`, each value mapped from the
/// top 53 bits of one `next_u64` draw as `(x >> 11) * 2^-53`. Same
/// `(h, w, seed)` always yields a bit-identical field.
pub fn init_field(h: usize, w: usize, seed: u64) -> Field {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field = Field::new(h, w);
    for i in 0..h {
        for j in 0..w {
            field.set(i, j, u64_to_unit_f64(rng.next_u64()));
        }
    }
    field
}

/// Maps a full-entropy u64 to f64 uniform in [0, 1) using its top 53 bits.
fn u64_to_unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Runs `variant` once on a fresh seeded field.
/// Returns the final field, the op count, and the resend count.
fn solve_once(cfg: &BenchConfig, variant: Variant) -> (Field, u64, u64) {
    let mut field = init_field(cfg.h, cfg.w, cfg.seed);
    let (ops, resends) = match variant {
        Variant::Seq => (seq_solve(&mut field, cfg.t_max), 0),
        Variant::Wavefront => {
            let report = wavefront_solve(&mut field, cfg.t_max, cfg.workers);
            (report.ops, report.stats.resend_events)
        }
        Variant::Dataparallel => (dataparallel_solve(&mut field, cfg.t_max, cfg.workers), 0),
    };
    (field, ops, resends)
}

/// One variant's timing series plus its summary.
#[derive(Clone, Debug)]
pub struct RunStats {
    /// The variant that was timed.
    pub variant: Variant,
    /// Wall-clock seconds per timed run, in execution order.
    pub times_s: Vec<f64>,
    /// Series summary (mean, min, max, reported value).
    pub summary: Summary,
}

/// Times `variant` for `cfg.runs` runs, each on a freshly initialized field
/// from `cfg.seed`. Only the solve call is timed — not field initialization
/// or verification. One untimed warm-up run precedes the series.
pub fn time_variant(cfg: &BenchConfig, variant: Variant) -> RunStats {
    let _ = solve_once(cfg, variant); // warm-up, untimed
    let mut times_s = Vec::with_capacity(cfg.runs);
    for _ in 0..cfg.runs {
        let mut field = init_field(cfg.h, cfg.w, cfg.seed);
        let start = Instant::now();
        match variant {
            Variant::Seq => {
                seq_solve(&mut field, cfg.t_max);
            }
            Variant::Wavefront => {
                wavefront_solve(&mut field, cfg.t_max, cfg.workers);
            }
            Variant::Dataparallel => {
                dataparallel_solve(&mut field, cfg.t_max, cfg.workers);
            }
        }
        times_s.push(start.elapsed().as_secs_f64());
    }
    let summary = summarize(&times_s);
    RunStats {
        variant,
        times_s,
        summary,
    }
}

/// Per-variant conservation checks from a verification pass.
#[derive(Clone, Copy, Debug)]
pub struct VariantCheck {
    pub variant: Variant,
    /// Row sweeps the variant reported.
    pub ops: u64,
    /// Row sweeps a correct run performs: `(H-2) * T`.
    pub expected_ops: u64,
    /// Rejected sends (always 0 for a correct wavefront run; trivially 0
    /// for the engine-free variants).
    pub resend_events: u64,
}

impl VariantCheck {
    pub fn passed(&self) -> bool {
        self.ops == self.expected_ops && self.resend_events == 0
    }
}

/// Pairwise field-equality result between two variants.
#[derive(Clone, Copy, Debug)]
pub struct PairCheck {
    pub a: Variant,
    pub b: Variant,
    /// Coordinates of the first differing cell, if the fields differ.
    pub first_diff: Option<(usize, usize)>,
}

impl PairCheck {
    pub fn passed(&self) -> bool {
        self.first_diff.is_none()
    }
}

/// Outcome of [`verify_all`]: per-variant conservation checks and pairwise
/// bit-equality of final fields.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub variants: Vec<VariantCheck>,
    pub pairs: Vec<PairCheck>,
}

impl VerifyReport {
    /// True when every op-count, resend and pairwise-equality check passed.
    pub fn passed(&self) -> bool {
        self.variants.iter().all(VariantCheck::passed) && self.pairs.iter().all(PairCheck::passed)
    }
}

/// Runs each configured variant once on identically seeded fields and
/// checks pairwise bit-equality plus op-count/resend conservation.
/// Requires at least two configured variants.
pub fn verify_all(cfg: &BenchConfig) -> Result<VerifyReport, ConfigError> {
    if cfg.variants.len() < 2 {
        return Err(ConfigError::NotEnoughVariants(cfg.variants.len()));
    }
    let mut fields = Vec::with_capacity(cfg.variants.len());
    let mut variants = Vec::with_capacity(cfg.variants.len());
    for &variant in &cfg.variants {
        let (field, ops, resends) = solve_once(cfg, variant);
        variants.push(VariantCheck {
            variant,
            ops,
            expected_ops: cfg.expected_ops(),
            resend_events: resends,
        });
        fields.push(field);
    }
    let mut pairs = Vec::new();
    for x in 0..fields.len() {
        for y in x + 1..fields.len() {
            pairs.push(PairCheck {
                a: cfg.variants[x],
                b: cfg.variants[y],
                first_diff: first_difference(&fields[x], &fields[y]),
            });
        }
    }
    Ok(VerifyReport { variants, pairs })
}
