//! Zero-mode counts per grade and the integer invariants built from them.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::sector::{reduce_sector, sector_grade_index, SectorReport};
use crate::analysis::spectrum::{numeric_spectrum, zero_tolerance};
use crate::error::Result;
use crate::fock::root_of_unity;
use crate::matrix::nullspace_dim;
use crate::model::FssqmModel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    /// `None` for the full model, `Some(μ)` for a sector.
    pub mu: Option<usize>,
    /// `c_k = q^k`, k = 1..λ.
    pub grades: Vec<Complex64>,
    /// States of each grade per positive level.
    pub multiplicities: Vec<usize>,
    /// Whether every positive level carried the same grade counts.
    pub uniform: bool,
    pub zero_mode_counts: Vec<usize>,
    /// `Δ_ij = m_i n_j − m_j n_i`, zero-based storage.
    pub delta: Vec<Vec<i64>>,
}

impl TopologyReport {
    /// `Δ_ij` with 1-based indices.
    pub fn delta_at(&self, i: usize, j: usize) -> i64 {
        self.delta[i - 1][j - 1]
    }
}

pub fn delta_matrix(multiplicities: &[usize], zero_modes: &[usize]) -> Vec<Vec<i64>> {
    let n = multiplicities.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    multiplicities[i] as i64 * zero_modes[j] as i64
                        - multiplicities[j] as i64 * zero_modes[i] as i64
                })
                .collect()
        })
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Grade counts of each positive level reduced by their common divisor, so
/// that accidentally coincident levels count once.
fn level_multiplicities(lambda: usize, levels: &[Vec<usize>]) -> (Vec<usize>, bool) {
    let counts: Vec<Vec<usize>> = levels
        .iter()
        .map(|grades| {
            let mut c = vec![0; lambda];
            for &k in grades {
                c[k - 1] += 1;
            }
            let d = c.iter().fold(0, |g, &x| gcd(g, x)).max(1);
            c.iter().map(|x| x / d).collect()
        })
        .collect();
    match counts.first() {
        Some(first) => (first.clone(), counts.iter().all(|c| c == first)),
        None => (vec![0; lambda], true),
    }
}

fn grades(lambda: usize) -> Vec<Complex64> {
    (1..=lambda)
        .map(|k| root_of_unity(lambda, k as i64))
        .collect()
}

/// Invariants of the full model: zero modes of `H` counted per block row by
/// independent rank computations on the safe block.
pub fn topological_invariants(model: &FssqmModel) -> Result<TopologyReport> {
    let lambda = model.lambda;
    let safe = model.safe_dim();
    let zero_tol = zero_tolerance(model);
    let scale = 1.0 + model.hamiltonian.inf_norm_on_columns(&model.safe_columns());
    let zero_mode_counts: Vec<usize> = (1..=lambda)
        .map(|i| {
            let idx: Vec<usize> = (0..safe).map(|n| model.index(i, n)).collect();
            nullspace_dim(&model.hamiltonian.principal(&idx), zero_tol / scale)
        })
        .collect();

    let n_levels = (safe / lambda).min(6);
    let spectrum = numeric_spectrum(model, n_levels)?;
    let positive: Vec<Vec<usize>> = spectrum.levels[1..]
        .iter()
        .map(|l| l.members.iter().map(|s| s.block).collect())
        .collect();
    let (multiplicities, uniform) = level_multiplicities(lambda, &positive);
    Ok(TopologyReport {
        mu: None,
        grades: grades(lambda),
        delta: delta_matrix(&multiplicities, &zero_mode_counts),
        multiplicities,
        uniform,
        zero_mode_counts,
    })
}

/// Invariants of sector μ, with `|n⟩` carrying the grade `q^{μ−n+1}`.
pub fn sector_invariants(model: &FssqmModel, mu: usize) -> Result<TopologyReport> {
    let report = reduce_sector(model, mu)?;
    Ok(sector_invariants_from(model, &report))
}

pub fn sector_invariants_from(model: &FssqmModel, report: &SectorReport) -> TopologyReport {
    let lambda = model.lambda;
    let mu = report.mu;
    let safe = model.safe_dim();
    let h = &report.hamiltonian;
    let scale = 1.0 + h.inf_norm_on_columns(&model.rep.safe_columns());
    let zero_mode_counts: Vec<usize> = (1..=lambda)
        .map(|k| {
            let idx: Vec<usize> = (0..safe)
                .filter(|&n| sector_grade_index(lambda, mu, n) == k)
                .collect();
            nullspace_dim(&h.principal(&idx), report.zero_tol / scale)
        })
        .collect();
    let positive: Vec<Vec<usize>> = report
        .levels
        .iter()
        .filter(|l| l.energy > report.zero_tol)
        .map(|l| {
            l.states
                .iter()
                .map(|&n| sector_grade_index(lambda, mu, n))
                .collect()
        })
        .collect();
    let (multiplicities, uniform) = level_multiplicities(lambda, &positive);
    TopologyReport {
        mu: Some(mu),
        grades: grades(lambda),
        delta: delta_matrix(&multiplicities, &zero_mode_counts),
        multiplicities,
        uniform,
        zero_mode_counts,
    }
}

/// `Δ_ij = i − j`.
pub fn expected_delta(lambda: usize) -> Vec<Vec<i64>> {
    (1..=lambda)
        .map(|i| (1..=lambda).map(|j| i as i64 - j as i64).collect())
        .collect()
}

/// `Δ^{(μ)}_ij = −1` for `i ≤ μ+1 < j`, `+1` for `j ≤ μ+1 < i`, else 0;
/// identically zero for `μ = λ−1`.
pub fn expected_sector_delta(lambda: usize, mu: usize) -> Vec<Vec<i64>> {
    let cut = mu + 1;
    (1..=lambda)
        .map(|i| {
            (1..=lambda)
                .map(|j| {
                    if mu + 1 == lambda {
                        0
                    } else if i <= cut && cut < j {
                        -1
                    } else if j <= cut && cut < i {
                        1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect()
}
