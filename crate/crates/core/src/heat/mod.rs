//! Gauss-Seidel heat-equation kernel: the field type, the in-place stencil,
//! the sequential oracle, the wavefront dependency predicate, and bit-exact
//! field comparison. Submodules provide the actor wavefront solver and the
//! even/odd data-parallel reference solver; all variants share one stencil
//! expression so their results are bit-identical.

mod dataparallel;
mod grid;
mod wavefront;

pub use dataparallel::dataparallel_solve;
pub use wavefront::{wavefront_solve, wavefront_solve_traced, WavefrontReport};

pub(crate) use grid::SharedGrid;

use std::collections::HashSet;

/// H x W grid of 64-bit temperatures. Solvers update interior cells only;
/// boundary cells (row 0, row H-1, column 0, column W-1) are never written.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    h: usize,
    w: usize,
    cells: Vec<f64>,
}

impl Field {
    /// Zero-filled H x W field. Requires at least one interior cell.
    pub fn new(h: usize, w: usize) -> Field {
        assert!(h >= 3 && w >= 3, "field must be at least 3x3, got {h}x{w}");
        Field {
            h,
            w,
            cells: vec![0.0; h * w],
        }
    }

    /// Row count H.
    pub fn h(&self) -> usize {
        self.h
    }

    /// Column count W.
    pub fn w(&self) -> usize {
        self.w
    }

    /// Cell value at (row, column).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.w + j]
    }

    /// Sets the cell at (row, column). Writing boundary cells is legal here
    /// (initialization fills the whole grid); solvers only write interior.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.cells[i * self.w + j] = value;
    }

    /// Row-major cell storage.
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }
}

/// The single stencil expression shared by every solver variant. Keeping it
/// in one place pins the floating-point operation order, which is what makes
/// cross-variant bit-equality achievable.
#[inline]
pub(crate) fn stencil_update(left: f64, right: f64, up: f64, down: f64) -> f64 {
    (left + right + up + down) * 0.25
}

/// One in-place Gauss-Seidel sweep of interior row `i`, ascending `j`:
/// `cell(i,j) <- 0.25 * (cell(i,j-1) + cell(i,j+1) + cell(i-1,j) + cell(i+1,j))`.
/// The `j-1` operand is the freshly written value from this same sweep.
pub fn stencil_op(field: &mut Field, i: usize) {
    assert!(
        (1..=field.h - 2).contains(&i),
        "stencil_op: row {i} outside interior 1..={}",
        field.h - 2
    );
    for j in 1..=field.w - 2 {
        let v = stencil_update(
            field.get(i, j - 1),
            field.get(i, j + 1),
            field.get(i - 1, j),
            field.get(i + 1, j),
        );
        field.set(i, j, v);
    }
}

/// Sequential solver: `t_max` outer time steps, each sweeping interior rows
/// in ascending order. This is the bit-exact oracle for the parallel
/// variants. Returns the number of row sweeps performed, `(H-2) * t_max`.
pub fn seq_solve(field: &mut Field, t_max: usize) -> u64 {
    let mut ops = 0;
    for _t in 1..=t_max {
        for i in 1..=field.h - 2 {
            stencil_op(field, i);
            ops += 1;
        }
    }
    ops
}

/// Wavefront dependency predicate: iteration (t, i) may execute once
/// iterations (t-1, i+1) and (t, i-1) have completed, where a neighbor that
/// does not exist (row off the interior, or t = 1 for the previous step)
/// counts as completed. Iteration (1, 1) is always ready. Used by the
/// schedule validator, not by the hot path.
pub fn dep_ready(
    t: usize,
    i: usize,
    done: &HashSet<(usize, usize)>,
    t_max: usize,
    h: usize,
) -> bool {
    debug_assert!((1..=t_max).contains(&t), "t={t} outside 1..={t_max}");
    debug_assert!((1..=h - 2).contains(&i), "i={i} outside 1..={}", h - 2);
    let prev_step_right_done = t == 1 || i + 1 > h - 2 || done.contains(&(t - 1, i + 1));
    let same_step_left_done = i == 1 || done.contains(&(t, i - 1));
    prev_step_right_done && same_step_left_done
}

/// Coordinates of the first cell (row-major) whose bits differ, if any.
/// Panics on dimension mismatch.
pub fn first_difference(a: &Field, b: &Field) -> Option<(usize, usize)> {
    assert!(
        a.h == b.h && a.w == b.w,
        "field comparison: dimension mismatch {}x{} vs {}x{}",
        a.h,
        a.w,
        b.h,
        b.w
    );
    for i in 0..a.h {
        for j in 0..a.w {
            if a.get(i, j).to_bits() != b.get(i, j).to_bits() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Bit-exact field equality (0 ulp tolerance). All solver variants execute
/// identical floating-point operations in dependency order, so exact
/// equality is achievable and required.
pub fn fields_equal(a: &Field, b: &Field) -> bool {
    first_difference(a, b).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 4x4 irregular fixture used by the golden-value tests.
    fn fixture_field() -> Field {
        let init = [
            [0.81, 0.12, 0.55, 0.34],
            [0.21, 0.77, 0.45, 0.66],
            [0.93, 0.08, 0.39, 0.58],
            [0.17, 0.95, 0.27, 0.72],
        ];
        let mut f = Field::new(4, 4);
        for (i, row) in init.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                f.set(i, j, v);
            }
        }
        f
    }

    #[test]
    fn uniform_field_is_a_fixed_point() {
        let mut f = Field::new(5, 7);
        for i in 0..5 {
            for j in 0..7 {
                f.set(i, j, 3.25);
            }
        }
        let reference = f.clone();
        seq_solve(&mut f, 4);
        assert!(fields_equal(&f, &reference));
    }

    #[test]
    fn stencil_averages_four_neighbors() {
        let mut f = Field::new(3, 3);
        f.set(1, 0, 4.0);
        f.set(1, 2, 8.0);
        f.set(0, 1, 12.0);
        f.set(2, 1, 16.0);
        f.set(1, 1, -123.456); // overwritten; value irrelevant
        stencil_op(&mut f, 1);
        assert_eq!(f.get(1, 1), 10.0);
    }

    #[test]
    fn stencil_reuses_freshly_written_left_neighbor() {
        // Gauss-Seidel in-place update: j=2 must read the new 0.25 at j=1.
        let mut f = Field::new(3, 4);
        f.set(1, 0, 1.0);
        f.set(1, 3, 1.0);
        stencil_op(&mut f, 1);
        let row1: Vec<f64> = (0..4).map(|j| f.get(1, j)).collect();
        assert_eq!(row1, vec![1.0, 0.25, 0.3125, 1.0]);
    }

    #[test]
    #[should_panic(expected = "outside interior")]
    fn stencil_rejects_boundary_row() {
        let mut f = Field::new(4, 4);
        stencil_op(&mut f, 0);
    }

    #[test]
    #[should_panic(expected = "outside interior")]
    fn stencil_rejects_bottom_boundary_row() {
        let mut f = Field::new(4, 4);
        stencil_op(&mut f, 3);
    }

    #[test]
    fn seq_solve_zero_steps_is_a_noop() {
        let mut f = fixture_field();
        let before = f.clone();
        assert_eq!(seq_solve(&mut f, 0), 0);
        assert!(fields_equal(&f, &before));
    }

    #[test]
    fn seq_solve_counts_row_ops() {
        let mut f = Field::new(6, 5);
        assert_eq!(seq_solve(&mut f, 7), 4 * 7);
    }

    // Frozen reference values (independent float64 evaluation of the same
    // update order). Exact decimal representations: parsing them reproduces
    // the precise bit patterns.
    #[test]
    fn golden_fixture_one_step() {
        let mut f = fixture_field();
        seq_solve(&mut f, 1);
        assert_eq!(f.get(1, 1), 0.215);
        assert_eq!(f.get(1, 2), 0.45375);
        assert_eq!(f.get(2, 1), 0.6212500000000001);
        assert_eq!(f.get(2, 2), 0.48124999999999996);
    }

    #[test]
    fn golden_fixture_three_steps() {
        let mut f = fixture_field();
        let before = f.clone();
        seq_solve(&mut f, 3);
        assert_eq!(f.get(1, 1), 0.37968749999999996);
        assert_eq!(f.get(1, 2), 0.5248437499999999);
        assert_eq!(f.get(2, 1), 0.69234375);
        assert_eq!(f.get(2, 2), 0.516796875);
        // Boundary untouched.
        for j in 0..4 {
            assert_eq!(f.get(0, j).to_bits(), before.get(0, j).to_bits());
            assert_eq!(f.get(3, j).to_bits(), before.get(3, j).to_bits());
        }
        for i in 0..4 {
            assert_eq!(f.get(i, 0).to_bits(), before.get(i, 0).to_bits());
            assert_eq!(f.get(i, 3).to_bits(), before.get(i, 3).to_bits());
        }
    }

    #[test]
    fn dep_ready_rules() {
        let mut done = HashSet::new();
        // (1,1) is always ready.
        assert!(dep_ready(1, 1, &done, 4, 6));
        // (2,1): needs (1,2); (2,0) does not exist.
        done.insert((1, 1));
        assert!(!dep_ready(2, 1, &done, 4, 6));
        done.insert((1, 2));
        assert!(dep_ready(2, 1, &done, 4, 6));
        // Top interior row: (t-1, i+1) is absent when i = h-2.
        let done2: HashSet<_> = [(2, 3)].into_iter().collect();
        assert!(dep_ready(2, 4, &done2, 4, 6));
        assert!(!dep_ready(2, 4, &HashSet::new(), 4, 6));
        // t=1 only waits on its left neighbor.
        assert!(!dep_ready(1, 2, &HashSet::new(), 4, 6));
        assert!(dep_ready(1, 2, &[(1, 1)].into_iter().collect(), 4, 6));
    }

    #[test]
    fn field_comparison_is_bitwise() {
        let a = fixture_field();
        let mut b = a.clone();
        assert!(fields_equal(&a, &b));
        assert_eq!(first_difference(&a, &b), None);
        // A 1-ulp perturbation must be detected.
        let v = b.get(2, 3);
        b.set(2, 3, f64::from_bits(v.to_bits() + 1));
        assert!(!fields_equal(&a, &b));
        assert_eq!(first_difference(&a, &b), Some((2, 3)));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn field_comparison_rejects_dimension_mismatch() {
        let a = Field::new(3, 4);
        let b = Field::new(4, 3);
        fields_equal(&a, &b);
    }
}
