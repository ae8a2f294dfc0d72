//! Shared mutable grid used by the parallel solvers. Concurrent mutation is
//! row-granular: each solver's scheduling protocol guarantees that while one
//! thread sweeps row `i`, no other thread writes rows `i-1..=i+1` or reads
//! row `i`. All unsafety is confined to this module.

use std::cell::UnsafeCell;

use super::{stencil_update, Field};

pub(crate) struct SharedGrid {
    h: usize,
    w: usize,
    cells: Vec<UnsafeCell<f64>>,
}

// SAFETY: cells are only touched through `stencil_op_row`, whose caller
// contract (see below) makes concurrent accesses disjoint, and through
// `into_field`, which requires exclusive ownership.
unsafe impl Sync for SharedGrid {}

impl SharedGrid {
    pub(crate) fn from_field(field: &Field) -> SharedGrid {
        SharedGrid {
            h: field.h(),
            w: field.w(),
            cells: field.cells().iter().map(|&v| UnsafeCell::new(v)).collect(),
        }
    }

    /// Copies the grid back into `field`. Takes the grid by value: all
    /// worker references are gone, so plain reads are safe.
    pub(crate) fn into_field(mut self, field: &mut Field) {
        assert_eq!((self.h, self.w), (field.h(), field.w()));
        for i in 0..self.h {
            for j in 0..self.w {
                field.set(i, j, *self.cells[i * self.w + j].get_mut());
            }
        }
    }

    #[inline]
    unsafe fn read(&self, i: usize, j: usize) -> f64 {
        unsafe { *self.cells[i * self.w + j].get() }
    }

    #[inline]
    unsafe fn write(&self, i: usize, j: usize, value: f64) {
        unsafe { *self.cells[i * self.w + j].get() = value }
    }

    /// In-place Gauss-Seidel sweep of interior row `i`, ascending `j` —
    /// the exact same arithmetic as [`super::stencil_op`].
    ///
    /// # Safety
    ///
    /// For the whole duration of the call, no other thread may write any of
    /// rows `i-1`, `i`, `i+1`, and no other thread may read row `i`. The
    /// caller must also provide happens-before edges between this call and
    /// any earlier writes it needs to observe (the solvers use the engine's
    /// delivery chain or a barrier for this).
    pub(crate) unsafe fn stencil_op_row(&self, i: usize) {
        debug_assert!((1..=self.h - 2).contains(&i));
        for j in 1..=self.w - 2 {
            // SAFETY: delegated to the caller contract above.
            unsafe {
                let v = stencil_update(
                    self.read(i, j - 1),
                    self.read(i, j + 1),
                    self.read(i - 1, j),
                    self.read(i + 1, j),
                );
                self.write(i, j, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::{fields_equal, seq_solve};

    /// The unsafe row sweep must be bit-identical to the safe one.
    #[test]
    fn shared_grid_sweep_matches_field_sweep() {
        let mut field = Field::new(5, 6);
        for i in 0..5 {
            for j in 0..6 {
                field.set(i, j, ((i * 31 + j * 17) % 19) as f64 * 0.061 + 0.13);
            }
        }
        let grid = SharedGrid::from_field(&field);
        // One full sequential time step on both representations.
        seq_solve(&mut field, 1);
        for i in 1..=3 {
            // SAFETY: single-threaded here.
            unsafe { grid.stencil_op_row(i) };
        }
        let mut round_tripped = Field::new(5, 6);
        grid.into_field(&mut round_tripped);
        assert!(fields_equal(&field, &round_tripped));
    }
}
