//! Reduction of the block model to λ single-Fock-space sectors and the
//! broken/unbroken classification of each sector.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::spectrum::{group_sorted, zero_tolerance};
use crate::error::{FssqmError, Result};
use crate::fock::root_of_unity;
use crate::matrix::{hermitian_eigenvalues, CMatrix};
use crate::model::FssqmModel;
use crate::residual::scaled_difference;

/// Allowed mismatch between a sector operator and the matching diagonal block
/// of `U·X·U†`.
pub const BLOCK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    UnbrokenNondegenerate,
    UnbrokenDegenerate,
    BrokenZeroEnergy,
    BrokenPositiveEnergy,
}

impl Classification {
    pub fn label(self) -> &'static str {
        match self {
            Self::UnbrokenNondegenerate => "unbroken-nondegenerate",
            Self::UnbrokenDegenerate => "unbroken-degenerate",
            Self::BrokenZeroEnergy => "broken-zero-energy",
            Self::BrokenPositiveEnergy => "broken-positive-energy",
        }
    }

    pub fn is_unbroken(self) -> bool {
        matches!(self, Self::UnbrokenNondegenerate | Self::UnbrokenDegenerate)
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// A level of `H_μ` with the Fock indices it contains.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorLevel {
    pub energy: f64,
    pub multiplicity: usize,
    pub states: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorReport {
    pub mu: usize,
    #[serde(skip)]
    pub hamiltonian: CMatrix,
    #[serde(skip)]
    pub supercharge: CMatrix,
    #[serde(skip)]
    pub covariant: CMatrix,
    #[serde(skip)]
    pub tau: CMatrix,
    #[serde(skip)]
    pub m_ops: Vec<CMatrix>,
    /// From the `f_i(μ) = 0` rule.
    pub classification: Classification,
    /// From the computed ground space and the action of `Q_μ` on it.
    pub numeric_classification: Classification,
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    /// Ground states not annihilated by `Q_μ`.
    pub charged_ground_states: Vec<usize>,
    pub levels: Vec<SectorLevel>,
    /// Largest mismatch against the blocks of `U·X·U†`.
    pub block_residual: f64,
    pub zero_tol: f64,
}

/// Diagonal-block sum `Σ_j X_j P_{μ−j+1}` over the λ blocks.
fn sector_sum(model: &FssqmModel, mu: usize, blocks: &[CMatrix]) -> CMatrix {
    let rep = &model.rep;
    let mut out = CMatrix::zeros(rep.dim, rep.dim);
    for (j, x) in blocks.iter().enumerate() {
        let p = rep.projector(mu as i64 - j as i64);
        out = &out + &(x * p);
    }
    out
}

fn diagonal_blocks(model: &FssqmModel, op: &CMatrix) -> Vec<CMatrix> {
    (0..model.lambda)
        .map(|j| op.block(j, j, model.dim()))
        .collect()
}

/// Diagonal block μ of `U·X·U†`.
pub fn reduced_block(model: &FssqmModel, op: &CMatrix, mu: usize) -> CMatrix {
    let u = &model.unitary;
    (&(u * op) * &u.adjoint()).block(mu, mu, model.dim())
}

/// `H_μ = Σ_i h_i(N) P_{μ−i+1}`.
pub fn sector_hamiltonian(model: &FssqmModel, mu: usize) -> CMatrix {
    sector_sum(model, mu, &diagonal_blocks(model, &model.hamiltonian))
}

/// `Q_μ = Σ_i A_i P_{μ−i+1}`.
pub fn sector_supercharge(model: &FssqmModel, mu: usize) -> CMatrix {
    sector_sum(model, mu, &model.supercharge_blocks())
}

/// `D_μ = Σ_i B_i P_{μ−i+1}`.
pub fn sector_covariant(model: &FssqmModel, mu: usize) -> CMatrix {
    sector_sum(model, mu, &model.covariant_blocks())
}

/// `τ_μ = q^{μ+1} T⁻¹`.
pub fn sector_tau(model: &FssqmModel, mu: usize) -> CMatrix {
    model
        .rep
        .grading_inverse()
        .scale(root_of_unity(model.lambda, mu as i64 + 1))
}

/// `M_{i,μ} = Σ_j m_{ij}(N) P_{μ−j+1}`, with the same ½ normalization as the
/// block operators `M_i`.
pub fn sector_m_operators(model: &FssqmModel, mu: usize) -> Vec<CMatrix> {
    model
        .m_ops
        .iter()
        .map(|m| sector_sum(model, mu, &diagonal_blocks(model, m)))
        .collect()
}

/// Classification from the component functions alone.
pub fn classify_by_rule(model: &FssqmModel, mu: usize, zero_tol: f64) -> Classification {
    let lambda = model.lambda;
    if mu == 0 {
        Classification::UnbrokenNondegenerate
    } else if mu + 1 == lambda {
        Classification::BrokenPositiveEnergy
    } else if model.f[..mu].iter().all(|f| f.eval(mu).norm() <= zero_tol) {
        Classification::UnbrokenDegenerate
    } else {
        Classification::BrokenZeroEnergy
    }
}

/// Largest `K` with the window `n ≤ λK + μ` inside the safe block.
fn window_top(model: &FssqmModel, mu: usize) -> usize {
    let lambda = model.lambda;
    let k = (model.safe_dim() - 1 - mu) / lambda;
    lambda * k + mu
}

/// Builds every sector operator, checks it against `U·X·U†`, and classifies
/// the sector.
pub fn reduce_sector(model: &FssqmModel, mu: usize) -> Result<SectorReport> {
    let lambda = model.lambda;
    if mu >= lambda {
        return Err(FssqmError::Precondition(format!(
            "sector index {mu} outside 0..{}",
            lambda - 1
        )));
    }
    let cols = model.rep.safe_columns();
    let hamiltonian = sector_hamiltonian(model, mu);
    let supercharge = sector_supercharge(model, mu);
    let covariant = sector_covariant(model, mu);
    let tau = sector_tau(model, mu);
    let m_ops = sector_m_operators(model, mu);

    let tau_prime = &model.tau * &model.grading_inverse_blocks();
    let mut checks: Vec<(&'static str, CMatrix, &CMatrix)> = vec![
        (
            "H",
            reduced_block(model, &model.hamiltonian, mu),
            &hamiltonian,
        ),
        (
            "Q",
            reduced_block(model, &model.supercharge, mu),
            &supercharge,
        ),
        ("D", reduced_block(model, &model.covariant, mu), &covariant),
        ("tau", tau_prime.block(mu, mu, model.dim()), &tau),
    ];
    for (m, sector_m) in model.m_ops.iter().zip(&m_ops) {
        checks.push(("M", reduced_block(model, m, mu), sector_m));
    }
    let mut block_residual: f64 = 0.0;
    for (what, reduced, built) in &checks {
        let r = scaled_difference(reduced, built, &cols);
        if r > BLOCK_TOL {
            return Err(FssqmError::BlockMismatch {
                mu,
                what,
                residual: r,
            });
        }
        block_residual = block_residual.max(r);
    }

    let zero_tol = zero_tolerance(model);
    let top = window_top(model, mu);
    let window: Vec<usize> = (0..=top).collect();
    let sub = hamiltonian.principal(&window);
    let eig = hermitian_eigenvalues(&sub, 1e-9)?;
    let diag = sub.diagonal();
    let levels: Vec<SectorLevel> = group_sorted(&eig, zero_tol)
        .into_iter()
        .map(|(energy, multiplicity)| SectorLevel {
            energy,
            multiplicity,
            states: window
                .iter()
                .filter(|&&n| (diag[n].re - energy).abs() <= zero_tol * (1.0 + energy.abs()))
                .copied()
                .collect(),
        })
        .collect();

    let ground = &levels[0];
    let ground_energy = ground.energy;
    let ground_degeneracy = ground.multiplicity;
    let q_scale = 1.0 + supercharge.inf_norm_on_columns(&cols);
    let charged_ground_states: Vec<usize> = ground
        .states
        .iter()
        .copied()
        .filter(|&n| {
            (0..supercharge.rows())
                .map(|r| supercharge[(r, n)].norm())
                .fold(0.0, f64::max)
                > 1e-10 * q_scale
        })
        .collect();
    let numeric_classification = if ground_energy > zero_tol {
        Classification::BrokenPositiveEnergy
    } else if !charged_ground_states.is_empty() {
        Classification::BrokenZeroEnergy
    } else if ground_degeneracy == 1 {
        Classification::UnbrokenNondegenerate
    } else {
        Classification::UnbrokenDegenerate
    };

    Ok(SectorReport {
        mu,
        hamiltonian,
        supercharge,
        covariant,
        tau,
        m_ops,
        classification: classify_by_rule(model, mu, zero_tol),
        numeric_classification,
        ground_energy,
        ground_degeneracy,
        charged_ground_states,
        levels,
        block_residual,
        zero_tol,
    })
}

/// `E^{(μ)}_n` for `n = 0..λ(k_max+1)`: the energy of `|n⟩` in sector μ is
/// `h_1(m)` with `m` the smallest integer `≥ n` congruent to μ mod λ.
pub fn sector_spectrum_formula(model: &FssqmModel, mu: usize, k_max: usize) -> Result<Vec<f64>> {
    let lambda = model.lambda;
    if lambda * k_max + lambda > model.safe_dim() {
        return Err(FssqmError::InsufficientDimension {
            required: lambda * k_max + 3 * lambda,
            actual: model.dim(),
        });
    }
    let mut out = Vec::with_capacity(lambda * (k_max + 1));
    for k in 0..=k_max {
        for nu in 0..lambda {
            let m = if nu <= mu {
                lambda * k + mu
            } else {
                lambda * (k + 1) + mu
            };
            out.push(model.h1(m));
        }
    }
    Ok(out)
}

/// Largest relative deviation between the closed-form sector energies and the
/// diagonal of `H_μ`.
pub fn sector_formula_residual(
    model: &FssqmModel,
    report: &SectorReport,
    k_max: usize,
) -> Result<f64> {
    let formula = sector_spectrum_formula(model, report.mu, k_max)?;
    Ok(formula
        .iter()
        .enumerate()
        .map(|(n, e)| (report.hamiltonian[(n, n)].re - e).abs() / (1.0 + e.abs()))
        .fold(0.0, f64::max))
}

/// Grade index `k ∈ 1..λ` of `|n⟩` in sector μ, i.e. `c = q^k` with
/// `k ≡ μ − n + 1`.
pub fn sector_grade_index(lambda: usize, mu: usize, n: usize) -> usize {
    let k = (mu as i64 - n as i64 + 1).rem_euclid(lambda as i64) as usize;
    if k == 0 {
        lambda
    } else {
        k
    }
}

/// `τ_μ` eigenvalue of `|n⟩`.
pub fn sector_grade(lambda: usize, mu: usize, n: usize) -> Complex64 {
    root_of_unity(lambda, sector_grade_index(lambda, mu, n) as i64)
}
