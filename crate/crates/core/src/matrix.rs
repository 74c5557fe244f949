//! Dense complex matrices.
//!
//! Every operator in the crate is stored as a [`CMatrix`]: row-major,
//! double-precision complex. The products skip structurally zero entries of
//! the left factor, which keeps the (mostly sparse) ladder and block
//! operators cheap without a separate sparse format.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{FssqmError, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(FssqmError::LengthMismatch {
                what: "matrix entries",
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Convenience constructor for real test matrices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = Complex64::new(v, 0.0);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape("add", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape("sub", other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn same_shape(&self, op: &'static str, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(FssqmError::DimensionMismatch {
                op,
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .map(|z| z.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum over the given columns only.
    pub fn inf_norm_on_columns(&self, cols: &[usize]) -> f64 {
        (0..self.rows)
            .map(|i| {
                cols.iter()
                    .map(|&j| self.data[i * self.cols + j].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Submatrix picked out by explicit row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Principal submatrix on an index list.
    pub fn principal(&self, idx: &[usize]) -> Self {
        self.select(idx, idx)
    }

    /// The `size`×`size` block at block coordinates (`row`, `col`), zero-based.
    pub fn block(&self, row: usize, col: usize, size: usize) -> Self {
        Self::from_fn(size, size, |i, j| self[(row * size + i, col * size + j)])
    }

    /// Writes `block` with its top-left corner at (`row0`, `col0`).
    pub fn set_block(&mut self, row0: usize, col0: usize, block: &Self) {
        assert!(row0 + block.rows <= self.rows && col0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (row0 + i) * self.cols + col0;
            self.data[dst..dst + block.cols]
                .copy_from_slice(&block.data[i * block.cols..(i + 1) * block.cols]);
        }
    }

    pub fn count_nonzero(&self) -> usize {
        self.data.iter().filter(|z| **z != ZERO).count()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.data[i * self.cols + j];
                write!(f, "{:>9.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Standard matrix product.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols != b.rows {
        return Err(FssqmError::DimensionMismatch {
            op: "matmul",
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let mut out = CMatrix::zeros(a.rows, b.cols);
    let n = b.cols;
    for i in 0..a.rows {
        let out_row = &mut out.data[i * n..(i + 1) * n];
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            let b_row = &b.data[k * n..(k + 1) * n];
            for (o, bkj) in out_row.iter_mut().zip(b_row) {
                *o += aik * bkj;
            }
        }
    }
    Ok(out)
}

pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// `a·b − q·b·a`; `q = 1` gives the ordinary commutator.
pub fn q_commutator(a: &CMatrix, b: &CMatrix, q: Complex64) -> Result<CMatrix> {
    if !a.is_square() || a.rows != b.rows || a.cols != b.cols {
        return Err(FssqmError::DimensionMismatch {
            op: "q_commutator",
            left: (a.rows, a.cols),
            right: (b.rows, b.cols),
        });
    }
    let ab = matmul(a, b)?;
    let ba = matmul(b, a)?;
    ab.checked_sub(&ba.scale(q))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    q_commutator(a, b, ONE)
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    q_commutator(a, b, -ONE)
}

/// `a` multiplied by itself `k` times; `k = 0` gives the identity.
pub fn mat_power(a: &CMatrix, k: usize) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(FssqmError::DimensionMismatch {
            op: "mat_power",
            left: (a.rows, a.cols),
            right: (a.rows, a.cols),
        });
    }
    let mut out = CMatrix::identity(a.rows);
    for _ in 0..k {
        out = matmul(&out, a)?;
    }
    Ok(out)
}

pub fn inf_norm(a: &CMatrix) -> f64 {
    a.inf_norm()
}

/// Number of columns left without a usable pivot after Gaussian elimination
/// with full pivoting. A pivot below `tol·(1 + ‖a‖∞)` counts as zero.
pub fn nullspace_dim(a: &CMatrix, tol: f64) -> usize {
    a.cols - rank(a, tol)
}

pub fn rank(a: &CMatrix, tol: f64) -> usize {
    let threshold = tol * (1.0 + a.inf_norm());
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut rank = 0;
    let mut col_perm: Vec<usize> = (0..cols).collect();

    while rank < rows.min(cols) {
        // largest remaining entry
        let mut best = (rank, rank, 0.0);
        for i in rank..rows {
            for (jj, &j) in col_perm.iter().enumerate().skip(rank) {
                let v = m.data[i * cols + j].norm();
                if v > best.2 {
                    best = (i, jj, v);
                }
            }
        }
        if best.2 <= threshold {
            break;
        }
        let (pi, pj, _) = best;
        if pi != rank {
            for j in 0..cols {
                m.data.swap(rank * cols + j, pi * cols + j);
            }
        }
        col_perm.swap(rank, pj);
        let pc = col_perm[rank];
        let pivot = m.data[rank * cols + pc];
        for i in rank + 1..rows {
            let factor = m.data[i * cols + pc] / pivot;
            if factor == ZERO {
                continue;
            }
            for j in 0..cols {
                let v = m.data[rank * cols + j];
                m.data[i * cols + j] -= factor * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Ascending eigenvalues of a Hermitian matrix.
///
/// The n×n Hermitian matrix `A + iB` is embedded as the 2n×2n real symmetric
/// matrix `[[A, −B], [B, A]]`, whose spectrum is that of the original with every
/// eigenvalue doubled. Cyclic Jacobi sweeps diagonalise the embedding and every
/// second sorted eigenvalue is returned.
pub fn hermitian_eigenvalues(a: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(FssqmError::DimensionMismatch {
            op: "hermitian_eigenvalues",
            left: (a.rows, a.cols),
            right: (a.cols, a.rows),
        });
    }
    let scale = 1.0 + a.inf_norm();
    let deviation = a.checked_sub(&a.adjoint())?.inf_norm();
    if deviation > tol * scale {
        return Err(FssqmError::NonHermitian { deviation });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Vec::new());
    }

    let m = 2 * n;
    let mut s = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            // symmetrise to remove the tolerated anti-Hermitian part
            let z = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            s[i * m + j] = z.re;
            s[(i + n) * m + (j + n)] = z.re;
            s[i * m + (j + n)] = -z.im;
            s[(i + n) * m + j] = z.im;
        }
    }

    jacobi_symmetric(&mut s, m);
    let mut eig: Vec<f64> = (0..m).map(|i| s[i * m + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig.into_iter().step_by(2).collect())
}

fn jacobi_symmetric(s: &mut [f64], m: usize) {
    const MAX_SWEEPS: usize = 100;
    let total: f64 = s.iter().map(|v| v * v).sum();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..m {
            for q in p + 1..m {
                off += s[p * m + q] * s[p * m + q];
            }
        }
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            return;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = s[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = s[p * m + p];
                let aqq = s[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..m {
                    let skp = s[k * m + p];
                    let skq = s[k * m + q];
                    s[k * m + p] = c * skp - sn * skq;
                    s[k * m + q] = sn * skp + c * skq;
                }
                for k in 0..m {
                    let spk = s[p * m + k];
                    let sqk = s[q * m + k];
                    s[p * m + k] = c * spk - sn * sqk;
                    s[q * m + k] = sn * spk + c * sqk;
                }
            }
        }
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.checked_add(rhs).expect("matrix add")
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.checked_sub(rhs).expect("matrix sub")
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        matmul(self, rhs).expect("matrix product")
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}
