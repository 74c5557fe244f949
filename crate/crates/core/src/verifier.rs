//! One-shot audit of every defining identity on a built model.

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::sector::{reduce_sector, sector_formula_residual};
use crate::analysis::spectrum::{analytic_spectrum, compare_spectra, numeric_spectrum};
use crate::analysis::topology::{expected_delta, topological_invariants};
use crate::error::FssqmError;
use crate::fock::check_grading_relations;
use crate::matrix::{mat_power, CMatrix};
use crate::model::{
    antihermitian_part, build_ssqm_limit, covariant_phases, hermitian_part, FssqmModel,
};
use crate::residual::{q_commutator_residual, scaled_difference};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Floor on the tolerance of the `M_i` product identities, whose residuals
/// grow with the size of the cancelling terms.
pub const M_IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationResult {
    pub name: String,
    pub formula: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl RelationResult {
    pub fn new(name: &str, formula: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            formula: formula.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        }
    }
}

pub fn all_passed(results: &[RelationResult]) -> bool {
    results.iter().all(|r| r.passed)
}

pub fn failures(results: &[RelationResult]) -> Vec<&RelationResult> {
    results.iter().filter(|r| !r.passed).collect()
}

struct Audit {
    out: Vec<RelationResult>,
    tol: f64,
}

impl Audit {
    fn push(&mut self, name: &str, formula: &str, residual: f64) {
        self.out
            .push(RelationResult::new(name, formula, residual, self.tol));
    }

    fn push_tol(&mut self, name: &str, formula: &str, residual: f64, tol: f64) {
        self.out
            .push(RelationResult::new(name, formula, residual, tol));
    }

    /// Integer-valued check: residual is the absolute mismatch, tolerance 0.
    fn push_exact(&mut self, name: &str, formula: &str, mismatch: f64) {
        self.out
            .push(RelationResult::new(name, formula, mismatch, 0.0));
    }
}

fn product(ops: &[&CMatrix]) -> CMatrix {
    let (first, rest) = ops.split_first().expect("nonempty product");
    rest.iter().fold((*first).clone(), |acc, m| &acc * m)
}

/// Norm of everything outside the diagonal blocks, restricted to `cols`.
pub fn off_block_residual(op: &CMatrix, lambda: usize, dim: usize, cols: &[usize]) -> f64 {
    let mut off = op.clone();
    for b in 0..lambda {
        off.set_block(b * dim, b * dim, &CMatrix::zeros(dim, dim));
    }
    off.inf_norm_on_columns(cols) / (1.0 + op.inf_norm_on_columns(cols))
}

/// `(X² − M_1)…(X² − M_l)`, optionally followed by `X`.
fn m_product(x: &CMatrix, m_ops: &[CMatrix], trailing: bool) -> CMatrix {
    let x2 = x * x;
    let mut acc = &x2 - &m_ops[0];
    for m in &m_ops[1..] {
        acc = &acc * &(&x2 - m);
    }
    if trailing {
        acc = &acc * x;
    }
    acc
}

/// Evaluates every relation on the safe block. Failures are results, never
/// errors.
pub fn audit(model: &FssqmModel, tol_rel: f64) -> Vec<RelationResult> {
    let mut a = Audit {
        out: Vec::new(),
        tol: tol_rel,
    };
    let lambda = model.lambda;
    let dim = model.dim();
    let rep = &model.rep;
    let q = model.q();
    let fcols = rep.safe_columns();
    let cols = model.safe_columns();
    let (n_op, lo, hi, t) = (&rep.number, &rep.lower, &rep.raise, &rep.grading);
    let (qm, dm, hm, tau, u) = (
        &model.supercharge,
        &model.covariant,
        &model.hamiltonian,
        &model.tau,
        &model.unitary,
    );

    // Deformed oscillator algebra.
    let g = rep.diag_fn(|n| Complex64::new(rep.f_table.g(n), 0.0));
    let fdiag = rep.diag_fn(|n| Complex64::new(rep.f(n as i64), 0.0));
    let fdiag1 = rep.diag_fn(|n| Complex64::new(rep.f(n as i64 + 1), 0.0));
    a.push(
        "gdoa_commutator",
        "[a, a†] = G(N)",
        scaled_difference(&(&(lo * hi) - &(hi * lo)), &g, &fcols),
    );
    a.push(
        "gdoa_number_a_adag",
        "a† a = F(N)",
        scaled_difference(&(hi * lo), &fdiag, &fcols),
    );
    a.push(
        "gdoa_number_adag_a",
        "a a† = F(N+1)",
        scaled_difference(&(lo * hi), &fdiag1, &fcols),
    );
    a.push(
        "gdoa_number_raise",
        "[N, a†] = a†",
        scaled_difference(&(&(n_op * hi) - &(hi * n_op)), hi, &fcols),
    );
    a.push(
        "gdoa_number_lower",
        "[N, a] = −a",
        scaled_difference(&(&(n_op * lo) - &(lo * n_op)), &lo.scale_real(-1.0), &fcols),
    );

    // Grading operator and projectors.
    let id = CMatrix::identity(dim);
    a.push(
        "grading_power",
        "T^λ = I",
        scaled_difference(&mat_power(t, lambda).expect("square"), &id, &fcols),
    );
    a.push(
        "grading_unitary",
        "T† T = I",
        scaled_difference(&(&t.adjoint() * t), &id, &fcols),
    );
    for r in check_grading_relations(rep, tol_rel).residuals {
        let name = match r.name.as_str() {
            "[N, T] = 0" => "grading_number",
            "a† T = q⁻¹ T a†" => "grading_raise",
            "a T = q T a" => "grading_lower",
            "[N, P_μ] = 0" => "projector_number",
            "a† P_μ = P_{μ+1} a†" => "projector_raise",
            _ => "projector_lower",
        };
        a.push(name, &r.name, r.residual);
    }
    let mut sum = CMatrix::zeros(dim, dim);
    let mut orth: f64 = 0.0;
    for mu in 0..lambda as i64 {
        sum = &sum + rep.projector(mu);
        for nu in 0..lambda as i64 {
            let expected = if mu == nu {
                rep.projector(mu).clone()
            } else {
                CMatrix::zeros(dim, dim)
            };
            orth = orth.max(scaled_difference(
                &(rep.projector(mu) * rep.projector(nu)),
                &expected,
                &fcols,
            ));
        }
    }
    a.push(
        "projector_completeness",
        "Σ_μ P_μ = I",
        scaled_difference(&sum, &id, &fcols),
    );
    a.push("projector_orthogonality", "P_μ P_ν = δ_{μν} P_μ", orth);

    // φ and the Hamiltonian.
    let phi_res = model.phi_table[lambda - 1..]
        .iter()
        .map(|p| {
            if p.re > 0.0 {
                p.im.abs() / (1.0 + p.norm())
            } else {
                1.0 + p.norm()
            }
        })
        .fold(0.0, f64::max);
    a.push("phi_real_positive", "φ(n) ∈ ℝ⁺ for n ≥ λ−1", phi_res);

    let blocks = model.supercharge_blocks();
    let mut oracle: f64 = 0.0;
    for i in 1..=lambda {
        let mut order: Vec<&CMatrix> = (1..i).rev().map(|k| &blocks[k - 1]).collect();
        order.extend((i..=lambda).rev().map(|k| &blocks[k - 1]));
        let prod = product(&order);
        let h_i = CMatrix::from_real_diag(&model.h_tables[i - 1]);
        oracle = oracle.max(scaled_difference(&prod, &h_i, &fcols));
    }
    a.push("hamiltonian_oracle", "A_{i−1}…A_1 A_λ…A_i = h_i(N)", oracle);
    a.push(
        "hamiltonian_hermitian",
        "H = H†",
        scaled_difference(hm, &hm.adjoint(), &cols),
    );
    let min_h = model
        .h_tables
        .iter()
        .flat_map(|t| t[..model.safe_dim()].iter())
        .fold(f64::INFINITY, |m, &x| m.min(x));
    a.push(
        "hamiltonian_nonnegative",
        "H ≥ 0",
        (-min_h).max(0.0) / (1.0 + hm.inf_norm_on_columns(&cols)),
    );

    // Supercharge and covariant derivative.
    a.push(
        "charge_power",
        "Q^λ = H",
        scaled_difference(&mat_power(qm, lambda).expect("square"), hm, &cols),
    );
    a.push(
        "charge_conserved",
        "[H, Q] = 0",
        scaled_difference(&(hm * qm), &(qm * hm), &cols),
    );
    a.push(
        "covariant_power",
        "D^λ = H",
        scaled_difference(&mat_power(dm, lambda).expect("square"), hm, &cols),
    );
    a.push(
        "covariant_conserved",
        "[H, D] = 0",
        scaled_difference(&(hm * dm), &(dm * hm), &cols),
    );
    a.push(
        "covariant_q_commutator",
        "DQ − qQD = 0",
        q_commutator_residual(dm, qm, q, &cols),
    );
    let prod_res = (0..=dim + lambda - 2)
        .map(|n| {
            let pf = model.phi_table[n];
            let pg: Complex64 = covariant_phases(lambda)
                .iter()
                .zip(&model.f)
                .map(|(p, f)| p * f.eval(n))
                .product();
            (pg - pf).norm() / (1.0 + pf.norm())
        })
        .fold(0.0, f64::max);
    a.push("covariant_product", "Π g_i = Π f_i", prod_res);

    // Z_λ grading of the block space.
    let big_id = CMatrix::identity(lambda * dim);
    a.push(
        "tau_power",
        "τ^λ = 1",
        scaled_difference(&mat_power(tau, lambda).expect("square"), &big_id, &cols),
    );
    a.push(
        "tau_unitary",
        "τ† τ = 1",
        scaled_difference(&(&tau.adjoint() * tau), &big_id, &cols),
    );
    a.push(
        "tau_charge",
        "τQ − qQτ = 0",
        q_commutator_residual(tau, qm, q, &cols),
    );
    a.push(
        "tau_covariant",
        "τD − qDτ = 0",
        q_commutator_residual(tau, dm, q, &cols),
    );
    a.push(
        "tau_hamiltonian",
        "[τ, H] = 0",
        scaled_difference(&(tau * hm), &(hm * tau), &cols),
    );

    // Reduction to sectors.
    let ud = u.adjoint();
    a.push(
        "unitary",
        "U U† = 1",
        scaled_difference(&(u * &ud), &big_id, &cols),
    );
    a.push(
        "unitary_left",
        "U† U = 1",
        scaled_difference(&(&ud * u), &big_id, &cols),
    );
    for (name, formula, op) in [
        (
            "reduced_hamiltonian_block_diagonal",
            "U H U† = diag(H_0, …, H_{λ−1})",
            hm,
        ),
        (
            "reduced_charge_block_diagonal",
            "U Q U† = diag(Q_0, …, Q_{λ−1})",
            qm,
        ),
        (
            "reduced_covariant_block_diagonal",
            "U D U† = diag(D_0, …, D_{λ−1})",
            dm,
        ),
    ] {
        let reduced = &(u * op) * &ud;
        a.push(
            name,
            formula,
            off_block_residual(&reduced, lambda, dim, &cols),
        );
    }
    let tau_prime = &(u * tau) * &ud;
    a.push(
        "reduced_tau",
        "U τ U† = τ T⁻¹",
        scaled_difference(&tau_prime, &(tau * &model.grading_inverse_blocks()), &cols),
    );
    let mut sector_block: f64 = 0.0;
    let mut sector_power: f64 = 0.0;
    let mut sector_cov_power: f64 = 0.0;
    let mut sector_tau: f64 = 0.0;
    let mut sector_formula: f64 = 0.0;
    let k_max = model.safe_dim() / lambda - 1;
    for mu in 0..lambda {
        match reduce_sector(model, mu) {
            Ok(s) => {
                sector_block = sector_block.max(s.block_residual);
                let h = &s.hamiltonian;
                sector_power = sector_power.max(scaled_difference(
                    &mat_power(&s.supercharge, lambda).expect("square"),
                    h,
                    &fcols,
                ));
                sector_cov_power = sector_cov_power.max(scaled_difference(
                    &mat_power(&s.covariant, lambda).expect("square"),
                    h,
                    &fcols,
                ));
                sector_tau =
                    sector_tau.max(q_commutator_residual(&s.tau, &s.supercharge, q, &fcols));
                sector_formula = sector_formula
                    .max(sector_formula_residual(model, &s, k_max).unwrap_or(f64::INFINITY));
            }
            Err(FssqmError::BlockMismatch { residual, .. }) => {
                sector_block = sector_block.max(residual)
            }
            Err(_) => sector_block = f64::INFINITY,
        }
    }
    a.push(
        "sector_operators",
        "diag blocks of U X U† = X_μ",
        sector_block,
    );
    a.push("sector_charge_power", "Q_μ^λ = H_μ", sector_power);
    a.push("sector_covariant_power", "D_μ^λ = H_μ", sector_cov_power);
    a.push("sector_tau_charge", "τ_μ Q_μ − q Q_μ τ_μ = 0", sector_tau);
    a.push(
        "sector_spectrum",
        "E^(μ)_n = h_1(λk+μ) branches",
        sector_formula,
    );

    // Topological symmetry operators.
    if !model.m_ops.is_empty() {
        let m_tol = tol_rel.max(M_IDENTITY_TOL);
        let l = model.l();
        let q1 = hermitian_part(qm);
        let q2 = antihermitian_part(qm);
        let scale_h = |s: f64| hm.scale_real(s);
        if lambda % 2 == 0 {
            let c = 2f64.powi(1 - l as i32);
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            a.push_tol(
                "m_identity_q1",
                "(Q_1² − M_1)…(Q_1² − M_l) = 2^{−l+1} H",
                scaled_difference(&m_product(&q1, &model.m_ops, false), &scale_h(c), &cols),
                m_tol,
            );
            a.push_tol(
                "m_identity_q2",
                "(Q_2² − M_1)…(Q_2² − M_l) = (−1)^l 2^{−l+1} H",
                scaled_difference(
                    &m_product(&q2, &model.m_ops, false),
                    &scale_h(sign * c),
                    &cols,
                ),
                m_tol,
            );
        } else {
            let c = 2f64.powf(-(l as f64) + 0.5);
            a.push_tol(
                "m_identity_q1",
                "(Q_1² − M_1)…(Q_1² − M_l) Q_1 = 2^{−l+1/2} H",
                scaled_difference(&m_product(&q1, &model.m_ops, true), &scale_h(c), &cols),
                m_tol,
            );
            a.push_tol(
                "m_identity_q2",
                "(Q_2² − M_1)…(Q_2² − M_l) Q_2 = 0",
                m_product(&q2, &model.m_ops, true).inf_norm_on_columns(&cols)
                    / (1.0 + hm.inf_norm_on_columns(&cols)),
                m_tol,
            );
        }
        let mut herm: f64 = 0.0;
        let mut with_q: f64 = 0.0;
        let mut with_tau: f64 = 0.0;
        for m in &model.m_ops {
            herm = herm.max(scaled_difference(m, &m.adjoint(), &cols));
            with_q = with_q.max(scaled_difference(&(m * qm), &(qm * m), &cols));
            with_tau = with_tau.max(scaled_difference(&(m * tau), &(tau * m), &cols));
        }
        a.push("m_hermitian", "M_i = M_i†", herm);
        a.push("m_charge", "[M_i, Q] = 0", with_q);
        a.push("m_tau", "[M_i, τ] = 0", with_tau);
        if let Some(min) = model.min_radicand_safe {
            a.push_tol("m_radicand", "δ(n)² ≥ 0", (-min).max(0.0), 1e-10);
        }
    }

    // Spectrum and invariants.
    let n_levels = (model.safe_dim() / lambda).min(6);
    match (
        analytic_spectrum(model, n_levels),
        numeric_spectrum(model, n_levels),
    ) {
        (Ok(an), Ok(nu)) => {
            let expected_ground = lambda * (lambda - 1) / 2;
            a.push_exact(
                "ground_degeneracy",
                "dim ker H = λ(λ−1)/2",
                (nu.ground().multiplicity as f64 - expected_ground as f64).abs(),
            );
            let worst = nu.levels[1..]
                .iter()
                .map(|l| (l.multiplicity as f64 - (lambda * an.count_at(l.energy)) as f64).abs())
                .fold(0.0, f64::max);
            a.push_exact("excited_multiplicity", "every E_n > 0 is λ-fold", worst);
            let merged = an.merged();
            let energy_res = if merged.levels.len() == nu.levels.len() {
                merged
                    .levels
                    .iter()
                    .zip(&nu.levels)
                    .map(|(x, y)| (x.energy - y.energy).abs() / (1.0 + x.energy.abs()))
                    .fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            a.push("spectrum_energies", "E_n = h_1(n+λ−2)", energy_res);
            let mult = if compare_spectra(&merged, &nu, f64::INFINITY).is_ok() {
                0.0
            } else {
                1.0
            };
            a.push_exact(
                "spectrum_multiplicities",
                "analytic = numeric multiplicities",
                mult,
            );
        }
        _ => a.push_exact("spectrum_energies", "E_n = h_1(n+λ−2)", f64::INFINITY),
    }
    match topological_invariants(model) {
        Ok(t) => {
            let expected = expected_delta(lambda);
            let worst = t
                .delta
                .iter()
                .flatten()
                .zip(expected.iter().flatten())
                .map(|(x, y)| (x - y).abs() as f64)
                .fold(0.0, f64::max);
            a.push_exact("topological_delta", "Δ_ij = i − j", worst);
        }
        Err(_) => a.push_exact("topological_delta", "Δ_ij = i − j", f64::INFINITY),
    }

    // λ = 2: nilpotent supersymmetry.
    if lambda == 2 {
        if let Ok(pair) = build_ssqm_limit(model) {
            let zero = CMatrix::zeros(2 * dim, 2 * dim);
            let sq = &pair.charge * &pair.charge;
            a.push_exact("ssqm_nilpotent", "𝒬² = 0", sq.inf_norm());
            let anti = &(&pair.charge * &pair.charge_adj) + &(&pair.charge_adj * &pair.charge);
            a.push(
                "ssqm_anticommutator",
                "{𝒬, 𝒬†} = H",
                scaled_difference(&anti, hm, &cols),
            );
            let dq = &(dm * qm) + &(qm * dm);
            a.push(
                "ssqm_dq_anticommutator",
                "DQ + QD = 0",
                scaled_difference(&dq, &zero, &cols),
            );
        }
    }
    a.out
}
