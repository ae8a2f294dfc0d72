//! Series statistics for benchmark reporting: the significant-digit summary
//! of a timing series and the relative-efficiency ratio between variants.

use serde::{Deserialize, Serialize};

/// Summary of one timing series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Arithmetic mean of the series.
    pub mean: f64,
    /// Smallest value in the series.
    pub min: f64,
    /// Largest value in the series.
    pub max: f64,
    /// The value to report: the mean rounded to the coarsest decimal
    /// precision that still lies strictly inside (min, max). Always within
    /// [min, max].
    pub reported: f64,
    /// Decimal places of `reported`; `None` when the series has zero spread
    /// (min == max) and the mean is reported at full precision.
    pub decimals: Option<u32>,
}

/// Rounds `value` to `decimals` decimal places (half away from zero).
pub fn round_to_decimals(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (value * scale).round() / scale
}

const MAX_DECIMALS: u32 = 17;

/// Summarizes a timing series: its mean, truncated to the coarsest decimal
/// precision whose rounding stays strictly inside the series' (min, max)
/// interval — i.e. every reported digit is guaranteed by the observed
/// spread. A zero-spread series keeps the full-precision mean.
///
/// # Panics
///
/// Panics on an empty series.
pub fn summarize(times: &[f64]) -> Summary {
    assert!(!times.is_empty(), "summarize: empty series");
    let mut min = times[0];
    let mut max = times[0];
    let mut sum = 0.0;
    for &t in times {
        min = min.min(t);
        max = max.max(t);
        sum += t;
    }
    let mean = sum / times.len() as f64;

    if min == max {
        return Summary {
            mean,
            min,
            max,
            reported: mean,
            decimals: None,
        };
    }
    for decimals in 0..=MAX_DECIMALS {
        let rounded = round_to_decimals(mean, decimals);
        if min < rounded && rounded < max {
            return Summary {
                mean,
                min,
                max,
                reported: rounded,
                decimals: Some(decimals),
            };
        }
    }
    // Degenerate spread narrower than ~1 ulp of the mean: fall back to the
    // full-precision mean (still within [min, max] since min < mean < max
    // can only fail when they collide at this magnitude).
    Summary {
        mean,
        min,
        max,
        reported: mean.clamp(min, max),
        decimals: None,
    }
}

/// Relative efficiency of a reference implementation against a baseline:
/// `100 * t_other / t_reference`, rounded to 2 significant figures (the
/// display convention for efficiency percentages).
///
/// # Panics
///
/// Panics unless both times are positive.
pub fn relative_efficiency(t_other: f64, t_reference: f64) -> f64 {
    assert!(
        t_reference > 0.0,
        "relative_efficiency: reference time must be positive, got {t_reference}"
    );
    assert!(
        t_other > 0.0,
        "relative_efficiency: compared time must be positive, got {t_other}"
    );
    round_to_sig_figs(100.0 * t_other / t_reference, 2)
}

/// Rounds to `figs` significant figures.
fn round_to_sig_figs(value: f64, figs: u32) -> f64 {
    debug_assert!(figs >= 1 && value > 0.0);
    let magnitude = value.log10().floor() as i32;
    let scale = 10f64.powi(magnitude - (figs as i32 - 1));
    (value / scale).round() * scale
}
