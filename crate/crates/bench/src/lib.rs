//! Shared fixtures for the benchmark targets.

use heatbench::{init_field, Field};

/// Deterministic field fixture used by every benchmark, so numbers are
/// comparable across runs and machines.
pub fn field_fixture(h: usize, w: usize) -> Field {
    init_field(h, w, 42)
}
