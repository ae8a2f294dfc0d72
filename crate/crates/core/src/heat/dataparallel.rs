//! Even/odd diagonal data-parallel reference solver. The (time-step, row)
//! iteration space is swept along diagonals: step t' processes rows of t''s
//! parity that satisfy `i <= t' && i > t' - 2*t_max`, which schedules each
//! row's t-th sweep at diagonal `2t + i - 2` — strictly after both of its
//! dependencies. Rows within a step are claimed dynamically (chunk size 1)
//! by a fork-join pool; a barrier separates steps.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Barrier;
use std::thread;

use super::{Field, SharedGrid};

/// Solves `t_max` time steps on `field` with `workers` fork-join threads.
/// The result is bit-identical to [`super::seq_solve`] on the same input.
/// Returns the number of row sweeps performed, `(H-2) * t_max`.
pub fn dataparallel_solve(field: &mut Field, t_max: usize, workers: usize) -> u64 {
    assert!(workers >= 1, "dataparallel_solve: workers >= 1");
    if t_max == 0 {
        return 0;
    }
    let h = field.h();
    let total_steps = (2 * t_max - 1) + (h - 3);
    let grid = SharedGrid::from_field(field);
    let ops = AtomicU64::new(0);
    let barrier = Barrier::new(workers);
    // One claim counter per step, allocated up front so a counter is never
    // reused while another thread could still be reading it.
    let claims: Vec<AtomicUsize> = (0..total_steps).map(|_| AtomicUsize::new(0)).collect();

    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                for step in 1..=total_steps {
                    let first_row = if step % 2 == 1 { 1 } else { 2 };
                    let claim = &claims[step - 1];
                    loop {
                        let slot = claim.fetch_add(1, Ordering::Relaxed);
                        let i = first_row + 2 * slot;
                        if i > h - 2 {
                            break;
                        }
                        if i <= step && i + 2 * t_max > step {
                            // SAFETY: rows processed in one step share the
                            // step's parity and so are at least 2 apart: each
                            // sweep writes only row i and reads i-1/i+1,
                            // which no concurrent sweep writes. The barrier
                            // orders steps.
                            unsafe { grid.stencil_op_row(i) };
                            ops.fetch_add(1, Ordering::Relaxed);
                        }
                    }
                    barrier.wait();
                }
            });
        }
    });

    grid.into_field(field);
    ops.load(Ordering::Relaxed)
}
