//! λ×λ block realization of fractional supersymmetric quantum mechanics.
//!
//! Operators act on λ copies of the truncated Fock space; the global index of
//! state `|n⟩` in block `i` (1-based) is `(i−1)·dim + n`. Every operator built
//! here conserves `n + i`, which is what keeps the truncation harmless on the
//! safe block.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use crate::error::{FssqmError, Result};
use crate::fock::{root_of_unity, FockRep};
use crate::function::ComponentFunction;
use crate::matrix::CMatrix;

/// Tolerance on `Im φ(n)` relative to `|φ(n)|`.
pub const PHI_REAL_TOL: f64 = 1e-12;

/// Radicands below `−RADICAND_TOL·(1 + s²)` are rejected; smaller negative
/// values are clamped to zero.
pub const RADICAND_TOL: f64 = 1e-10;

/// Places `dim×dim` blocks into a `(λ·dim)²` matrix. Block coordinates are
/// 1-based, `(row, col)`.
pub fn build_block_operator(
    dim: usize,
    lambda: usize,
    blocks: &[((usize, usize), CMatrix)],
) -> Result<CMatrix> {
    let mut out = CMatrix::zeros(lambda * dim, lambda * dim);
    for ((row, col), block) in blocks {
        if !(1..=lambda).contains(row) || !(1..=lambda).contains(col) {
            return Err(FssqmError::BlockIndex {
                row: *row,
                col: *col,
                lambda,
            });
        }
        if block.rows() != dim || block.cols() != dim {
            return Err(FssqmError::DimensionMismatch {
                op: "build_block_operator",
                left: (dim, dim),
                right: (block.rows(), block.cols()),
            });
        }
        out.set_block((row - 1) * dim, (col - 1) * dim, block);
    }
    Ok(out)
}

/// Block-diagonal operator with the same `dim×dim` block on every diagonal slot.
pub fn block_diagonal(lambda: usize, block: &CMatrix) -> CMatrix {
    let dim = block.rows();
    let mut out = CMatrix::zeros(lambda * dim, lambda * dim);
    for b in 0..lambda {
        out.set_block(b * dim, b * dim, block);
    }
    out
}

/// `φ(n) = Π_i f_i(n)`.
pub fn phi(f: &[ComponentFunction], n: usize) -> Complex64 {
    f.iter().map(|fi| fi.eval(n)).product()
}

/// Checks `φ(n) ∈ ℝ⁺` for `λ−1 ≤ n ≤ max_n`.
pub fn validate_phi(f: &[ComponentFunction], lambda: usize, max_n: usize) -> Result<()> {
    for n in lambda - 1..=max_n {
        let p = phi(f, n);
        if !(p.re > 0.0 && p.im.abs() <= PHI_REAL_TOL * (1.0 + p.norm()) && p.re.is_finite()) {
            return Err(FssqmError::PhiViolation {
                n,
                re: p.re,
                im: p.im,
            });
        }
    }
    Ok(())
}

fn check_inputs(rep: &FockRep, f: &[ComponentFunction]) -> Result<()> {
    if f.len() != rep.lambda {
        return Err(FssqmError::LengthMismatch {
            what: "component functions",
            expected: rep.lambda,
            actual: f.len(),
        });
    }
    let max_n = rep.dim + rep.lambda - 2;
    for fi in f {
        fi.validate(max_n)?;
    }
    validate_phi(f, rep.lambda, max_n)
}

/// `h_1(n) = φ(n) Π_{j=1}^{λ−1} F(n+1−j)`, with `F` zero at negative arguments.
pub fn h1(rep: &FockRep, f: &[ComponentFunction], n: usize) -> f64 {
    let fprod: f64 = (1..rep.lambda)
        .map(|j| rep.f(n as i64 + 1 - j as i64))
        .product();
    if fprod == 0.0 {
        return 0.0;
    }
    phi(f, n).re * fprod
}

/// Ladder blocks `A_1 … A_λ` with `A_i = f_i(N+i) a` and
/// `A_λ = f_λ(N) (a†)^{λ−1}`, given per-block multipliers `w_i`.
fn ladder_blocks(rep: &FockRep, coeff: impl Fn(usize, usize) -> Complex64) -> Vec<CMatrix> {
    let lambda = rep.lambda;
    let mut blocks: Vec<CMatrix> = (1..lambda)
        .map(|i| &rep.diag_fn(|n| coeff(i, n + i)) * &rep.lower)
        .collect();
    blocks.push(&rep.diag_fn(|n| coeff(lambda, n)) * &rep.raise_power(lambda - 1));
    blocks
}

fn cyclic_operator(rep: &FockRep, blocks: &[CMatrix]) -> CMatrix {
    let lambda = rep.lambda;
    let mut placed: Vec<((usize, usize), CMatrix)> = (1..lambda)
        .map(|i| ((i + 1, i), blocks[i - 1].clone()))
        .collect();
    placed.push(((1, lambda), blocks[lambda - 1].clone()));
    build_block_operator(rep.dim, lambda, &placed).expect("cyclic block layout")
}

/// The blocks `A_1 … A_λ` of the supercharge.
pub fn supercharge_blocks(rep: &FockRep, f: &[ComponentFunction]) -> Vec<CMatrix> {
    ladder_blocks(rep, |i, n| f[i - 1].eval(n))
}

/// `Q = Σ_{i<λ} A_i e_{i+1,i} + A_λ e_{1,λ}`.
pub fn build_supercharge(rep: &FockRep, f: &[ComponentFunction]) -> Result<CMatrix> {
    check_inputs(rep, f)?;
    Ok(cyclic_operator(rep, &supercharge_blocks(rep, f)))
}

/// `H = Σ_i h_i(N) e_{i,i}` with `h_i(n) = h_1(n+i−1)`. Returns the operator
/// and the tables `h_i(0..dim)`.
pub fn build_hamiltonian(
    rep: &FockRep,
    f: &[ComponentFunction],
) -> Result<(CMatrix, Vec<Vec<f64>>)> {
    check_inputs(rep, f)?;
    let tables: Vec<Vec<f64>> = (0..rep.lambda)
        .map(|shift| (0..rep.dim).map(|n| h1(rep, f, n + shift)).collect())
        .collect();
    let diag: Vec<f64> = tables.iter().flatten().copied().collect();
    Ok((CMatrix::from_real_diag(&diag), tables))
}

/// Phase of `g_i = q^{−(λ−2i+1)/2} f_i`, i.e. `k(N) = q^{−(λ−1)/2}` times `q^{i−1}`.
pub fn covariant_phase(lambda: usize, i: usize) -> Complex64 {
    root_of_unity(2 * lambda, -(lambda as i64 - 2 * i as i64 + 1))
}

pub fn covariant_phases(lambda: usize) -> Vec<Complex64> {
    (1..=lambda).map(|i| covariant_phase(lambda, i)).collect()
}

/// The blocks `B_1 … B_λ` for `g_i = phases[i−1]·f_i`.
pub fn covariant_blocks_with_phases(
    rep: &FockRep,
    f: &[ComponentFunction],
    phases: &[Complex64],
) -> Vec<CMatrix> {
    ladder_blocks(rep, |i, n| phases[i - 1] * f[i - 1].eval(n))
}

/// `D` built from arbitrary phases `g_i / f_i`.
pub fn build_covariant_derivative_with_phases(
    rep: &FockRep,
    f: &[ComponentFunction],
    phases: &[Complex64],
) -> Result<CMatrix> {
    check_inputs(rep, f)?;
    if phases.len() != rep.lambda {
        return Err(FssqmError::LengthMismatch {
            what: "covariant phases",
            expected: rep.lambda,
            actual: phases.len(),
        });
    }
    Ok(cyclic_operator(
        rep,
        &covariant_blocks_with_phases(rep, f, phases),
    ))
}

/// `D = Σ_{i<λ} B_i e_{i+1,i} + B_λ e_{1,λ}` with `B_i = g_i(N+i) a`,
/// `B_λ = g_λ(N)(a†)^{λ−1}`.
pub fn build_covariant_derivative(rep: &FockRep, f: &[ComponentFunction]) -> Result<CMatrix> {
    build_covariant_derivative_with_phases(rep, f, &covariant_phases(rep.lambda))
}

/// `τ = Σ_i q^i e_{i,i}`.
pub fn build_grading_tau(lambda: usize, dim: usize) -> CMatrix {
    let diag: Vec<Complex64> = (1..=lambda)
        .flat_map(|i| std::iter::repeat(root_of_unity(lambda, i as i64)).take(dim))
        .collect();
    CMatrix::from_diag(&diag)
}

/// `U = Σ_{i,j} P_{i−j} e_{i,j}`.
pub fn build_reduction_unitary(rep: &FockRep) -> CMatrix {
    let lambda = rep.lambda;
    let mut blocks = Vec::with_capacity(lambda * lambda);
    for i in 1..=lambda {
        for j in 1..=lambda {
            blocks.push(((i, j), rep.projector(i as i64 - j as i64).clone()));
        }
    }
    build_block_operator(rep.dim, lambda, &blocks).expect("unitary block layout")
}

/// `α_i(n) = |f_i(n)|² F(n+1−i)` for `i < λ`, and
/// `α_λ(n) = |f_λ(n)|² Π_{j=1}^{λ−1} F(n+1−j)`.
pub fn alpha_coefficients(rep: &FockRep, f: &[ComponentFunction], n: usize) -> Vec<f64> {
    let lambda = rep.lambda;
    let mut out: Vec<f64> = (1..lambda)
        .map(|i| f[i - 1].eval(n).norm_sqr() * rep.f(n as i64 + 1 - i as i64))
        .collect();
    let fprod: f64 = (1..lambda)
        .map(|j| rep.f(n as i64 + 1 - j as i64))
        .product();
    out.push(f[lambda - 1].eval(n).norm_sqr() * fprod);
    out
}

/// `δ(n)²` for λ = 4 or 5, `None` otherwise.
pub fn radicand(alpha: &[f64]) -> Option<f64> {
    let s: f64 = alpha.iter().sum();
    let cross = match alpha.len() {
        4 => alpha[0] * alpha[2] + alpha[1] * alpha[3],
        5 => {
            alpha[0] * alpha[2]
                + alpha[1] * alpha[3]
                + alpha[2] * alpha[4]
                + alpha[3] * alpha[0]
                + alpha[4] * alpha[1]
        }
        _ => return None,
    };
    Some(s * s - 4.0 * cross)
}

/// The `M_i` operators together with the smallest radicand encountered.
#[derive(Debug, Clone)]
pub struct MOperators {
    pub ops: Vec<CMatrix>,
    /// Smallest `δ(n)²` over the evaluated range (λ = 4, 5), before clamping.
    pub min_radicand: Option<f64>,
    /// Smallest `δ(n)²` over arguments reached from the safe block.
    pub min_radicand_safe: Option<f64>,
}

/// Values `m_{i1}(n)`, i = 1..l, for λ = 3, 4, 5.
pub fn m_roots(
    rep: &FockRep,
    f: &[ComponentFunction],
    n: usize,
) -> Result<(Vec<f64>, Option<f64>)> {
    let alpha = alpha_coefficients(rep, f, n);
    let s: f64 = alpha.iter().sum();
    match rep.lambda {
        3 => Ok((vec![s], None)),
        4 | 5 => {
            let d2 = radicand(&alpha).expect("lambda 4 or 5");
            if d2 < -RADICAND_TOL * (1.0 + s * s) {
                return Err(FssqmError::NegativeRadicand { n, value: d2 });
            }
            let delta = d2.max(0.0).sqrt();
            Ok((vec![0.5 * (s - delta), 0.5 * (s + delta)], Some(d2)))
        }
        other => Err(FssqmError::UnsupportedLambda(other)),
    }
}

/// `Q_1 = (Q + Q†)/√2`.
pub fn hermitian_part(q: &CMatrix) -> CMatrix {
    (q + &q.adjoint()).scale_real(1.0 / SQRT_2)
}

/// `Q_2 = (Q − Q†)/(i√2)`.
pub fn antihermitian_part(q: &CMatrix) -> CMatrix {
    (q - &q.adjoint()).scale(Complex64::new(0.0, -1.0 / SQRT_2))
}

/// `M_i = ½ Σ_j m_{i1}(N+j−1) e_{j,j}` for λ = 3, 4, 5. For λ = 2 the single
/// operator is `M_1 = Q_1² − H`.
pub fn build_m_operators(
    rep: &FockRep,
    f: &[ComponentFunction],
    q: &CMatrix,
    h: &CMatrix,
) -> Result<MOperators> {
    let lambda = rep.lambda;
    if lambda == 2 {
        let q1 = hermitian_part(q);
        return Ok(MOperators {
            ops: vec![&(&q1 * &q1) - h],
            min_radicand: None,
            min_radicand_safe: None,
        });
    }
    if !(3..=5).contains(&lambda) {
        return Err(FssqmError::UnsupportedLambda(lambda));
    }
    let l = lambda / 2;
    let top = rep.dim + lambda - 2;
    let mut roots = Vec::with_capacity(top + 1);
    let mut min_all: Option<f64> = None;
    let mut min_safe: Option<f64> = None;
    for n in 0..=top {
        let (r, d2) = m_roots(rep, f, n)?;
        if let Some(d2) = d2 {
            min_all = Some(min_all.map_or(d2, |m: f64| m.min(d2)));
            if n < rep.safe_dim + lambda - 1 {
                min_safe = Some(min_safe.map_or(d2, |m: f64| m.min(d2)));
            }
        }
        roots.push(r);
    }
    let ops = (0..l)
        .map(|i| {
            let diag: Vec<f64> = (0..lambda)
                .flat_map(|j| (0..rep.dim).map(move |n| (n, j)))
                .map(|(n, j)| 0.5 * roots[n + j][i])
                .collect();
            CMatrix::from_real_diag(&diag)
        })
        .collect();
    Ok(MOperators {
        ops,
        min_radicand: min_all,
        min_radicand_safe: min_safe,
    })
}

/// Nilpotent supercharges of the λ = 2 limit.
#[derive(Debug, Clone)]
pub struct SsqmPair {
    /// `𝒬 = f(N+1) a e_{2,1}`.
    pub charge: CMatrix,
    pub charge_adj: CMatrix,
}

/// Builds `𝒬 = (Q + iD)/2` for λ = 2 with `f_1 = f_2` real and positive on
/// positive integers.
///
/// With this normalization `{𝒬, 𝒬†} = (Q² + D²)/2 = H`.
pub fn build_ssqm_limit(model: &FssqmModel) -> Result<SsqmPair> {
    if model.lambda != 2 {
        return Err(FssqmError::Precondition(format!(
            "the SSQM limit needs lambda = 2, got {}",
            model.lambda
        )));
    }
    let rep = &model.rep;
    for n in 0..=rep.dim {
        let (f1, f2) = (model.f[0].eval(n), model.f[1].eval(n));
        if f1 != f2 || f1.im != 0.0 {
            return Err(FssqmError::Precondition(format!(
                "f_1 and f_2 must coincide and be real, differ at n = {n}"
            )));
        }
        if n >= 1 && f1.re <= 0.0 {
            return Err(FssqmError::Precondition(format!(
                "f must be positive on positive integers, f({n}) = {}",
                f1.re
            )));
        }
    }
    let block = &rep.diag_fn(|n| model.f[0].eval(n + 1)) * &rep.lower;
    let charge = build_block_operator(rep.dim, 2, &[((2, 1), block)])?;
    let charge_adj = charge.adjoint();
    Ok(SsqmPair { charge, charge_adj })
}

/// A fully assembled model.
#[derive(Debug, Clone)]
pub struct FssqmModel {
    pub lambda: usize,
    pub rep: FockRep,
    pub f: Vec<ComponentFunction>,
    /// `φ(n)` for `n = 0..=dim+λ−2`.
    pub phi_table: Vec<Complex64>,
    /// `h_i(n)`, outer index `i−1`.
    pub h_tables: Vec<Vec<f64>>,
    pub supercharge: CMatrix,
    pub covariant: CMatrix,
    pub hamiltonian: CMatrix,
    pub tau: CMatrix,
    pub unitary: CMatrix,
    /// `M_1 … M_l`; empty for λ ≥ 6.
    pub m_ops: Vec<CMatrix>,
    pub min_radicand: Option<f64>,
    pub min_radicand_safe: Option<f64>,
}

impl FssqmModel {
    pub fn build(rep: FockRep, f: Vec<ComponentFunction>) -> Result<Self> {
        let lambda = rep.lambda;
        let supercharge = build_supercharge(&rep, &f)?;
        let (hamiltonian, h_tables) = build_hamiltonian(&rep, &f)?;
        let covariant = build_covariant_derivative(&rep, &f)?;
        let tau = build_grading_tau(lambda, rep.dim);
        let unitary = build_reduction_unitary(&rep);
        let (m_ops, min_radicand, min_radicand_safe) = if lambda <= 5 {
            let m = build_m_operators(&rep, &f, &supercharge, &hamiltonian)?;
            (m.ops, m.min_radicand, m.min_radicand_safe)
        } else {
            (Vec::new(), None, None)
        };
        let phi_table = (0..=rep.dim + lambda - 2).map(|n| phi(&f, n)).collect();
        Ok(Self {
            lambda,
            rep,
            f,
            phi_table,
            h_tables,
            supercharge,
            covariant,
            hamiltonian,
            tau,
            unitary,
            m_ops,
            min_radicand,
            min_radicand_safe,
        })
    }

    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn safe_dim(&self) -> usize {
        self.rep.safe_dim
    }

    pub fn q(&self) -> Complex64 {
        self.rep.q
    }

    /// Global index of `|n⟩` in block `i` (1-based).
    pub fn index(&self, block: usize, n: usize) -> usize {
        (block - 1) * self.rep.dim + n
    }

    /// Columns of the safe block in the tensor space.
    pub fn safe_columns(&self) -> Vec<usize> {
        crate::residual::block_columns(self.lambda, self.rep.dim, self.rep.safe_dim)
    }

    pub fn h(&self, block: usize, n: usize) -> f64 {
        self.h_tables[block - 1][n]
    }

    /// `h_1(n)` for any `n ≤ dim+λ−2`.
    pub fn h1(&self, n: usize) -> f64 {
        h1(&self.rep, &self.f, n)
    }

    pub fn supercharge_blocks(&self) -> Vec<CMatrix> {
        supercharge_blocks(&self.rep, &self.f)
    }

    pub fn covariant_blocks(&self) -> Vec<CMatrix> {
        covariant_blocks_with_phases(&self.rep, &self.f, &covariant_phases(self.lambda))
    }

    /// `T⁻¹` repeated on every diagonal block.
    pub fn grading_inverse_blocks(&self) -> CMatrix {
        block_diagonal(self.lambda, &self.rep.grading_inverse())
    }

    /// `l = ⌊λ/2⌋`.
    pub fn l(&self) -> usize {
        self.lambda / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_fock_rep, StructureFunctionSpec};
    use crate::matrix::mat_power;
    use crate::residual::scaled_difference;

    fn reference(lambda: usize, dim: usize) -> FssqmModel {
        let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, lambda, dim).unwrap();
        FssqmModel::build(rep, vec![ComponentFunction::one(); lambda]).unwrap()
    }

    #[test]
    fn block_placement() {
        let i2 = CMatrix::identity(2);
        let m = build_block_operator(2, 2, &[((1, 1), i2.clone())]).unwrap();
        let mut expected = CMatrix::zeros(4, 4);
        expected.set_block(0, 0, &i2);
        assert_eq!(m, expected);
        assert!(matches!(
            build_block_operator(2, 2, &[((3, 1), i2)]),
            Err(FssqmError::BlockIndex { .. })
        ));
    }

    #[test]
    fn supercharge_pattern_lambda3() {
        let m = reference(3, 12);
        let dim = 12;
        for r in 0..3 {
            for c in 0..3 {
                let nonzero = m.supercharge.block(r, c, dim).count_nonzero() > 0;
                let expected = matches!((r + 1, c + 1), (2, 1) | (3, 2) | (1, 3));
                assert_eq!(nonzero, expected, "block ({}, {})", r + 1, c + 1);
            }
        }
        let a = &m.rep.lower;
        assert_eq!(m.supercharge.block(1, 0, dim), *a);
        assert_eq!(m.supercharge.block(2, 1, dim), *a);
        assert_eq!(m.supercharge.block(0, 2, dim), &m.rep.raise * &m.rep.raise);
    }

    #[test]
    fn hamiltonian_tables_lambda3() {
        let m = reference(3, 15);
        for n in 0..15 {
            let x = n as f64;
            assert_eq!(m.h(1, n), x * (x - 1.0).max(0.0));
            assert_eq!(m.h(2, n), (x + 1.0) * x);
            assert_eq!(m.h(3, n), (x + 2.0) * (x + 1.0));
        }
        assert_eq!(m.h(1, 0), 0.0);
        assert_eq!(m.h(1, 1), 0.0);
    }

    #[test]
    fn lambda2_square_is_hamiltonian() {
        let m = reference(2, 12);
        let q2 = &m.supercharge * &m.supercharge;
        let cols = m.safe_columns();
        assert!(scaled_difference(&q2, &m.hamiltonian, &cols) < 1e-14);
        for n in 0..12 {
            assert_eq!(m.h(1, n), n as f64);
        }
    }

    #[test]
    fn lambda4_power_matches() {
        let m = reference(4, 20);
        let q4 = mat_power(&m.supercharge, 4).unwrap();
        assert!(scaled_difference(&q4, &m.hamiltonian, &m.safe_columns()) < 1e-12);
    }

    #[test]
    fn covariant_phases_lambda2() {
        let p = covariant_phases(2);
        assert_eq!(p, vec![Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0)]);
    }

    #[test]
    fn phases_multiply_to_one() {
        for lambda in 2..=7 {
            let prod: Complex64 = covariant_phases(lambda).iter().product();
            assert!((prod - 1.0).norm() < 1e-14, "lambda {lambda}");
        }
    }

    #[test]
    fn tau_lambda2() {
        let tau = build_grading_tau(2, 3);
        let expected = CMatrix::from_real_diag(&[-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]);
        assert_eq!(tau, expected);
    }

    #[test]
    fn unitary_blocks_are_projectors() {
        let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, 2, 8).unwrap();
        let u = build_reduction_unitary(&rep);
        let p1: Vec<f64> = u.block(0, 1, 8).diagonal().iter().map(|z| z.re).collect();
        assert_eq!(&p1[..4], &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(&u * &u.adjoint(), CMatrix::identity(16));
    }

    #[test]
    fn m_lambda3_values() {
        let m = reference(3, 12);
        let m1 = &m.m_ops[0];
        // block 1 carries m_11(n)/2 = (n² + n − 1)/2 for n ≥ 1, 0 at n = 0
        assert_eq!(m1[(0, 0)].re, 0.0);
        for n in 1..12 {
            let x = n as f64;
            assert_eq!(m1[(n, n)].re, 0.5 * (x * x + x - 1.0));
        }
    }

    #[test]
    fn phi_violation_reports_n() {
        let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, 3, 12).unwrap();
        // f_1(n) = n − 4 vanishes at n = 4 ≥ λ − 1
        let f = vec![
            ComponentFunction::shifted(4.0),
            ComponentFunction::one(),
            ComponentFunction::one(),
        ];
        assert!(matches!(
            FssqmModel::build(rep, f),
            Err(FssqmError::PhiViolation { n: 2, .. })
        ));
    }

    #[test]
    fn m_unsupported_lambda() {
        let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, 6, 24).unwrap();
        let f = vec![ComponentFunction::one(); 6];
        let q = build_supercharge(&rep, &f).unwrap();
        let (h, _) = build_hamiltonian(&rep, &f).unwrap();
        assert_eq!(
            build_m_operators(&rep, &f, &q, &h).unwrap_err(),
            FssqmError::UnsupportedLambda(6)
        );
    }

    #[test]
    fn ssqm_requires_lambda2() {
        assert!(build_ssqm_limit(&reference(3, 12)).is_err());
        assert!(build_ssqm_limit(&reference(2, 12)).is_ok());
    }
}
