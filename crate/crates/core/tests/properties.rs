mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use fssqm::analysis::sector::reduce_sector;
use fssqm::analysis::spectrum::{analytic_spectrum, compare_spectra, numeric_spectrum};
use fssqm::fock::{build_fock_rep, check_grading_relations, StructureFunctionSpec};
use fssqm::function::ComponentFunction;
use fssqm::matrix::{hermitian_eigenvalues, mat_power, matmul, nullspace_dim, rank, CMatrix};
use fssqm::residual::scaled_difference;
use fssqm::verifier::{audit, DEFAULT_TOL};

fn complex_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        CMatrix::from_fn(n, n, |i, j| {
            let (re, im) = v[i * n + j];
            Complex64::new(re, im)
        })
    })
}

fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).inf_norm() / (1.0 + a.inf_norm().max(b.inf_norm()))
}

/// λ, then λ alphas with zero sum and |α| ≤ 0.5.
fn alphas() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..=4).prop_flat_map(|lambda| {
        prop::collection::vec(-0.25f64..0.25, lambda - 1).prop_map(move |mut a| {
            let last = -a.iter().sum::<f64>();
            a.push(last);
            (lambda, a)
        })
    })
}

/// Constant complex components whose phases cancel, so φ is real and positive.
fn phased_constants(lambda: usize) -> impl Strategy<Value = Vec<ComponentFunction>> {
    (
        prop::collection::vec(0.5f64..2.0, lambda),
        prop::collection::vec(-PI..PI, lambda - 1),
    )
        .prop_map(move |(moduli, mut phases)| {
            phases.push(-phases.iter().sum::<f64>());
            moduli
                .iter()
                .zip(&phases)
                .map(|(r, t)| ComponentFunction::poly(vec![Complex64::from_polar(*r, *t)]))
                .collect()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution(a in complex_matrix(5)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn product_is_associative(a in complex_matrix(4), b in complex_matrix(4), c in complex_matrix(4)) {
        let left = matmul(&matmul(&a, &b).unwrap(), &c).unwrap();
        let right = matmul(&a, &matmul(&b, &c).unwrap()).unwrap();
        prop_assert!(rel(&left, &right) < 1e-12);
    }

    #[test]
    fn powers_add(a in complex_matrix(4), j in 0usize..4, k in 0usize..4) {
        let lhs = mat_power(&a, j + k).unwrap();
        let rhs = &mat_power(&a, j).unwrap() * &mat_power(&a, k).unwrap();
        prop_assert!(rel(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn rank_nullity(v in prop::collection::vec(-1.0f64..1.0, 6 * 3), r in 1usize..=3) {
        // Product of 6×r and r×6 factors has rank r generically.
        let left = CMatrix::from_fn(6, r, |i, j| Complex64::new(v[i * 3 + j], 0.3 * v[(i * 3 + j + 1) % 18]));
        let right = CMatrix::from_fn(r, 6, |i, j| Complex64::new(v[(j * 3 + i + 2) % 18], 0.0) + if i == j % r { 1.0 } else { 0.0 });
        let a = &left * &right;
        let tol = 1e-9;
        prop_assert_eq!(nullspace_dim(&a, tol) + rank(&a, tol), 6);
    }

    #[test]
    fn diagonal_eigenvalues_are_sorted_entries(d in prop::collection::vec(-50.0f64..50.0, 1..8)) {
        let eig = hermitian_eigenvalues(&CMatrix::from_real_diag(&d), 1e-12).unwrap();
        let mut sorted = d.clone();
        sorted.sort_by(f64::total_cmp);
        for (x, y) in eig.iter().zip(&sorted) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn hermitian_eigenvalues_preserve_trace(a in complex_matrix(5)) {
        let h = &a + &a.adjoint();
        let eig = hermitian_eigenvalues(&h, 1e-12).unwrap();
        let trace: f64 = h.diagonal().iter().map(|z| z.re).sum();
        prop_assert!((eig.iter().sum::<f64>() - trace).abs() < 1e-9);
        prop_assert!(eig.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn extended_algebra_relations((lambda, alpha) in alphas()) {
        let spec = StructureFunctionSpec::c_lambda_extended(alpha);
        let rep = build_fock_rep(&spec, lambda, 6 * lambda).unwrap();
        let cols = rep.safe_columns();
        let comm = &(&rep.lower * &rep.raise) - &(&rep.raise * &rep.lower);
        let g = CMatrix::from_real_diag(&(0..rep.dim).map(|n| rep.f_table.g(n)).collect::<Vec<_>>());
        prop_assert!(scaled_difference(&comm, &g, &cols) < 1e-12);
        prop_assert!(check_grading_relations(&rep, 1e-12).passed());
        let mut sum = CMatrix::zeros(rep.dim, rep.dim);
        for mu in 0..lambda as i64 {
            let p = rep.projector(mu);
            prop_assert_eq!(&(p * p), p);
            prop_assert_eq!(&p.adjoint(), p);
            sum = &sum + p;
        }
        prop_assert_eq!(sum, CMatrix::identity(rep.dim));
    }

    #[test]
    fn random_models_pass_the_audit(
        (lambda, alpha, f) in alphas().prop_flat_map(|(l, a)| (Just(l), Just(a), phased_constants(l)))
    ) {
        let m = common::model(&StructureFunctionSpec::c_lambda_extended(alpha), lambda, 6 * lambda, f);
        for r in audit(&m, DEFAULT_TOL) {
            prop_assert!(r.passed, "{} residual {}", r.name, r.residual);
        }
    }

    #[test]
    fn spectra_agree((lambda, alpha) in alphas(), shift in 0usize..3) {
        prop_assume!(shift + 1 < lambda);
        let m = common::engineered_zero(&StructureFunctionSpec::c_lambda_extended(alpha), lambda, 8 * lambda, shift);
        let a = analytic_spectrum(&m, 6).unwrap();
        let n = numeric_spectrum(&m, 6).unwrap();
        prop_assert!(compare_spectra(&a.merged(), &n, 1e-9).is_ok());
        prop_assert_eq!(n.ground().multiplicity, lambda * (lambda - 1) / 2);
        prop_assert!(n.levels.iter().all(|l| l.energy >= -n.zero_tol));
    }

    #[test]
    fn sectors_partition_the_spectrum((lambda, alpha) in alphas()) {
        let m = common::model(&StructureFunctionSpec::c_lambda_extended(alpha), lambda, 6 * lambda, vec![ComponentFunction::one(); lambda]);
        let safe = m.safe_dim();
        let mut full: Vec<f64> = (1..=lambda).flat_map(|i| (0..safe).map(move |n| (i, n))).map(|(i, n)| m.h(i, n)).collect();
        let mut sectors = Vec::new();
        for mu in 0..lambda {
            let s = reduce_sector(&m, mu).unwrap();
            sectors.extend((0..safe).map(|n| s.hamiltonian[(n, n)].re));
        }
        full.sort_by(f64::total_cmp);
        sectors.sort_by(f64::total_cmp);
        prop_assert_eq!(full, sectors);
    }
}
