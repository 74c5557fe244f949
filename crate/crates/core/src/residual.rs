//! Scaled residuals for operator identities checked on a column subset.

use num_complex::Complex64;

use crate::matrix::CMatrix;

/// `‖(lhs − rhs)|cols‖∞ / (1 + max(‖lhs|cols‖∞, ‖rhs|cols‖∞))`.
///
/// Only the listed columns enter; rows are unrestricted. Both matrices must
/// have the same shape.
pub fn scaled_difference(lhs: &CMatrix, rhs: &CMatrix, cols: &[usize]) -> f64 {
    let diff = lhs - rhs;
    let scale = 1.0
        + lhs
            .inf_norm_on_columns(cols)
            .max(rhs.inf_norm_on_columns(cols));
    diff.inf_norm_on_columns(cols) / scale
}

/// Residual of `a·b == q·b·a` on the given columns.
pub fn q_commutator_residual(a: &CMatrix, b: &CMatrix, q: Complex64, cols: &[usize]) -> f64 {
    let ab = a * b;
    let ba = (b * a).scale(q);
    scaled_difference(&ab, &ba, cols)
}

/// Column indices `block·dim + n` for every block and every `n < safe`.
pub fn block_columns(lambda: usize, dim: usize, safe: usize) -> Vec<usize> {
    (0..lambda)
        .flat_map(|b| (0..safe).map(move |n| b * dim + n))
        .collect()
}
