//! Spectrum of the block Hamiltonian: closed-form levels, an independent
//! numerical route, and the action of the supercharge on each level.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{FssqmError, Result};
use crate::fock::root_of_unity;
use crate::matrix::{hermitian_eigenvalues, CMatrix};
use crate::model::FssqmModel;

/// Relative tolerance defining "zero energy".
pub const ZERO_TOL_REL: f64 = 1e-8;

/// A basis state `|n⟩` in block `block` with its τ grade `q^block`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateLabel {
    pub block: usize,
    pub n: usize,
    pub grade: Complex64,
}

impl StateLabel {
    pub fn new(lambda: usize, block: usize, n: usize) -> Self {
        Self {
            block,
            n,
            grade: root_of_unity(lambda, block as i64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
    pub members: Vec<StateLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub levels: Vec<Level>,
    pub zero_tol: f64,
}

impl SpectrumReport {
    pub fn ground(&self) -> &Level {
        &self.levels[0]
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.multiplicity).collect()
    }

    /// Levels sorted by energy with coincident ones (within `zero_tol`)
    /// merged. Families of the closed-form spectrum can coincide or appear
    /// out of order when `F` is not increasing.
    pub fn merged(&self) -> SpectrumReport {
        let mut sorted = self.levels.clone();
        sorted.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        let mut levels: Vec<Level> = Vec::with_capacity(sorted.len());
        for level in sorted {
            match levels.last_mut() {
                Some(last) if (level.energy - last.energy).abs() <= self.zero_tol => {
                    last.multiplicity += level.multiplicity;
                    last.members.extend(level.members);
                }
                _ => levels.push(level),
            }
        }
        SpectrumReport {
            levels,
            zero_tol: self.zero_tol,
        }
    }

    /// Number of levels of `self` within `zero_tol` of `energy`.
    pub fn count_at(&self, energy: f64) -> usize {
        self.levels
            .iter()
            .filter(|l| (l.energy - energy).abs() <= self.zero_tol)
            .count()
    }
}

/// `1e−8·(1 + ‖H‖∞)` with the norm taken over the safe block.
pub fn zero_tolerance(model: &FssqmModel) -> f64 {
    let norm = (1..=model.lambda)
        .flat_map(|i| (0..model.safe_dim()).map(move |n| (i, n)))
        .map(|(i, n)| model.h(i, n).abs())
        .fold(0.0, f64::max);
    ZERO_TOL_REL * (1.0 + norm)
}

/// `d_j = j(2λ − j − 1)/2`.
pub fn ground_offset(lambda: usize, j: usize) -> usize {
    j * (2 * lambda - j - 1) / 2
}

/// The ground state `|φ_0, i⟩`, i = 1..λ(λ−1)/2, as (block j, Fock index).
pub fn ground_state(lambda: usize, i: usize) -> (usize, usize) {
    let j = (1..lambda)
        .find(|&j| ground_offset(lambda, j - 1) < i && i <= ground_offset(lambda, j))
        .expect("ground index in range");
    (j, i - ground_offset(lambda, j - 1) - 1)
}

/// The excited state `|φ_n, i⟩ = |n + λ − 1 − i⟩ e_i`.
pub fn excited_state(lambda: usize, level: usize, i: usize) -> (usize, usize) {
    (i, level + lambda - 1 - i)
}

/// `E_n = φ(n+λ−2) Π_{j=1}^{λ−1} F(n+λ−1−j)`, i.e. `h_1(n+λ−2)`.
pub fn excited_energy(model: &FssqmModel, level: usize) -> f64 {
    model.h1(level + model.lambda - 2)
}

fn check_levels(model: &FssqmModel, n_levels: usize) -> Result<()> {
    let lambda = model.lambda;
    if n_levels == 0 || n_levels * lambda > model.safe_dim() {
        return Err(FssqmError::InsufficientDimension {
            required: n_levels.max(1) * lambda + 2 * lambda,
            actual: model.dim(),
        });
    }
    Ok(())
}

/// Levels read off the closed-form eigenvector families.
pub fn analytic_spectrum(model: &FssqmModel, n_levels: usize) -> Result<SpectrumReport> {
    check_levels(model, n_levels)?;
    let lambda = model.lambda;
    let ground_members: Vec<StateLabel> = (1..=lambda * (lambda - 1) / 2)
        .map(|i| {
            let (block, n) = ground_state(lambda, i);
            StateLabel::new(lambda, block, n)
        })
        .collect();
    let mut levels = vec![Level {
        energy: 0.0,
        multiplicity: ground_members.len(),
        members: ground_members,
    }];
    for level in 1..n_levels {
        let members: Vec<StateLabel> = (1..=lambda)
            .map(|i| {
                let (block, n) = excited_state(lambda, level, i);
                StateLabel::new(lambda, block, n)
            })
            .collect();
        levels.push(Level {
            energy: excited_energy(model, level),
            multiplicity: lambda,
            members,
        });
    }
    Ok(SpectrumReport {
        levels,
        zero_tol: zero_tolerance(model),
    })
}

/// Groups sorted values whose consecutive gaps are at most `tol`.
pub fn group_sorted(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match groups.last_mut() {
            Some((_, count, last)) if (v - *last).abs() <= tol => {
                *count += 1;
                *last = v;
            }
            _ => groups.push((v, 1, v)),
        }
    }
    groups
        .into_iter()
        .map(|(first, count, _)| (first, count))
        .collect()
}

/// Eigenvalues of `H` on the subspace `n + i ≤ n_levels + λ − 2`, grouped into
/// levels.
///
/// The subspace is invariant under `Q`, `Q†` and `H` and holds exactly the
/// ground family and the first `n_levels − 1` excited families; the
/// eigenvalues come from the Jacobi solver, and members are the basis states
/// whose diagonal entry falls in the level.
pub fn numeric_spectrum(model: &FssqmModel, n_levels: usize) -> Result<SpectrumReport> {
    check_levels(model, n_levels)?;
    let lambda = model.lambda;
    let bound = n_levels + lambda - 2;
    let states: Vec<(usize, usize)> = (1..=lambda)
        .flat_map(|i| (0..=bound.saturating_sub(i)).map(move |n| (i, n)))
        .filter(|&(i, n)| n + i <= bound)
        .collect();
    let idx: Vec<usize> = states.iter().map(|&(i, n)| model.index(i, n)).collect();
    let sub = model.hamiltonian.principal(&idx);
    let zero_tol = zero_tolerance(model);
    let eig = hermitian_eigenvalues(&sub, 1e-9)?;
    let groups = group_sorted(&eig, zero_tol);

    let diag = sub.diagonal();
    let levels = groups
        .into_iter()
        .map(|(energy, multiplicity)| {
            let members = states
                .iter()
                .zip(&diag)
                .filter(|(_, d)| (d.re - energy).abs() <= zero_tol * (1.0 + energy.abs()))
                .map(|(&(block, n), _)| StateLabel::new(lambda, block, n))
                .collect();
            Level {
                energy,
                multiplicity,
                members,
            }
        })
        .collect();
    Ok(SpectrumReport { levels, zero_tol })
}

/// Compares two reports level by level: energies within `rel_tol·(1+E)`,
/// multiplicities exactly.
pub fn compare_spectra(a: &SpectrumReport, b: &SpectrumReport, rel_tol: f64) -> Result<()> {
    if a.levels.len() != b.levels.len() {
        return Err(FssqmError::SpectrumMismatch {
            level: a.levels.len().min(b.levels.len()),
            detail: format!("{} levels vs {} levels", a.levels.len(), b.levels.len()),
        });
    }
    for (k, (x, y)) in a.levels.iter().zip(&b.levels).enumerate() {
        if x.multiplicity != y.multiplicity {
            return Err(FssqmError::SpectrumMismatch {
                level: k,
                detail: format!("multiplicity {} vs {}", x.multiplicity, y.multiplicity),
            });
        }
        if (x.energy - y.energy).abs() > rel_tol * (1.0 + x.energy.abs()) {
            return Err(FssqmError::SpectrumMismatch {
                level: k,
                detail: format!("energy {} vs {}", x.energy, y.energy),
            });
        }
    }
    Ok(())
}

/// Image of one level member under `Q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub from: StateLabel,
    /// `None` when the state is annihilated.
    pub to: Option<StateLabel>,
    pub amplitude: Complex64,
    /// Whether the image lies inside the same level.
    pub within_level: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitMap {
    pub energy: f64,
    pub transitions: Vec<Transition>,
}

impl OrbitMap {
    pub fn annihilated(&self) -> Vec<StateLabel> {
        self.transitions
            .iter()
            .filter(|t| t.to.is_none())
            .map(|t| t.from)
            .collect()
    }

    /// True when `Q` permutes the members in a single cycle with nonzero
    /// amplitudes.
    pub fn is_single_cycle(&self) -> bool {
        let n = self.transitions.len();
        if n == 0
            || self
                .transitions
                .iter()
                .any(|t| t.to.is_none() || !t.within_level)
        {
            return false;
        }
        let position = |s: &StateLabel| {
            self.transitions
                .iter()
                .position(|t| t.from.block == s.block && t.from.n == s.n)
        };
        let mut current = 0;
        for step in 1..=n {
            let Some(next) = self.transitions[current].to.as_ref().and_then(position) else {
                return false;
            };
            current = next;
            if current == 0 {
                return step == n;
            }
        }
        false
    }
}

/// Applies `Q` to every member of `level`.
///
/// Amplitudes below `1e−12·(1 + ‖Q‖)` count as zero.
pub fn supercharge_orbit(model: &FssqmModel, level: &Level) -> OrbitMap {
    let q = &model.supercharge;
    let threshold = 1e-12 * (1.0 + q.inf_norm_on_columns(&model.safe_columns()));
    let dim = model.dim();
    let transitions = level
        .members
        .iter()
        .map(|&from| {
            let col = model.index(from.block, from.n);
            let image = (0..q.rows())
                .map(|row| (row, q[(row, col)]))
                .filter(|(_, z)| z.norm() > threshold)
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()));
            match image {
                Some((row, amplitude)) => {
                    let to = StateLabel::new(model.lambda, row / dim + 1, row % dim);
                    let within_level = level
                        .members
                        .iter()
                        .any(|m| m.block == to.block && m.n == to.n);
                    Transition {
                        from,
                        to: Some(to),
                        amplitude,
                        within_level,
                    }
                }
                None => Transition {
                    from,
                    to: None,
                    amplitude: Complex64::new(0.0, 0.0),
                    within_level: true,
                },
            }
        })
        .collect();
    OrbitMap {
        energy: level.energy,
        transitions,
    }
}

/// The factor `f_j(i + j − d_{j−1} − 2)` governing `Q|φ_0, i⟩` for
/// `d_{j−1} + 2 ≤ i ≤ d_j`; `None` for the states `Q` always annihilates.
pub fn ground_orbit_factor(model: &FssqmModel, i: usize) -> Option<Complex64> {
    let lambda = model.lambda;
    let (j, _) = ground_state(lambda, i);
    let start = ground_offset(lambda, j - 1) + 1;
    if i == start {
        return None;
    }
    Some(model.f[j - 1].eval(i + j - start - 1))
}

/// Grade `q^k` of a member's block.
pub fn grade_of(lambda: usize, block: usize) -> Complex64 {
    root_of_unity(lambda, block as i64)
}

/// Tensor-space vector of a basis state.
pub fn basis_vector(model: &FssqmModel, block: usize, n: usize) -> CMatrix {
    let mut v = CMatrix::zeros(model.lambda * model.dim(), 1);
    v[(model.index(block, n), 0)] = Complex64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_fock_rep, StructureFunctionSpec};
    use crate::function::ComponentFunction;

    fn model(lambda: usize, dim: usize, f: Vec<ComponentFunction>) -> FssqmModel {
        let rep = build_fock_rep(&StructureFunctionSpec::Oscillator, lambda, dim).unwrap();
        FssqmModel::build(rep, f).unwrap()
    }

    fn reference(lambda: usize, dim: usize) -> FssqmModel {
        model(lambda, dim, vec![ComponentFunction::one(); lambda])
    }

    #[test]
    fn ground_offsets() {
        assert_eq!(
            (0..3).map(|j| ground_offset(3, j)).collect::<Vec<_>>(),
            vec![0, 2, 3]
        );
        assert_eq!(ground_state(3, 1), (1, 0));
        assert_eq!(ground_state(3, 2), (1, 1));
        assert_eq!(ground_state(3, 3), (2, 0));
        assert_eq!(ground_offset(5, 4), 10);
    }

    #[test]
    fn analytic_lambda3() {
        let s = analytic_spectrum(&reference(3, 20), 4).unwrap();
        assert_eq!(s.energies(), vec![0.0, 2.0, 6.0, 12.0]);
        assert_eq!(s.multiplicities(), vec![3, 3, 3, 3]);
    }

    #[test]
    fn analytic_lambda2() {
        let s = analytic_spectrum(&reference(2, 20), 4).unwrap();
        assert_eq!(s.energies(), vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(s.multiplicities(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn level_count_is_checked() {
        let err = analytic_spectrum(&reference(3, 12), 3).unwrap_err();
        assert_eq!(
            err,
            FssqmError::InsufficientDimension {
                required: 15,
                actual: 12
            }
        );
    }

    #[test]
    fn numeric_agrees_lambda3() {
        let m = reference(3, 30);
        let a = analytic_spectrum(&m, 5).unwrap();
        let b = numeric_spectrum(&m, 5).unwrap();
        compare_spectra(&a, &b, 1e-10).unwrap();
        for (x, y) in a.levels.iter().zip(&b.levels) {
            let mut xm: Vec<_> = x.members.iter().map(|s| (s.block, s.n)).collect();
            let mut ym: Vec<_> = y.members.iter().map(|s| (s.block, s.n)).collect();
            xm.sort();
            ym.sort();
            assert_eq!(xm, ym);
        }
    }

    #[test]
    fn lambda4_excited_multiplicity() {
        let m = reference(4, 32);
        let b = numeric_spectrum(&m, 6).unwrap();
        assert_eq!(b.ground().multiplicity, 6);
        assert!(b.levels[1..].iter().all(|l| l.multiplicity == 4));
    }

    #[test]
    fn coincident_families_merge() {
        let rep = build_fock_rep(
            &StructureFunctionSpec::c_lambda_extended([1.0, -1.0]),
            2,
            24,
        )
        .unwrap();
        let m = FssqmModel::build(rep, vec![ComponentFunction::one(); 2]).unwrap();
        let a = analytic_spectrum(&m, 5).unwrap();
        assert_eq!(a.energies(), vec![0.0, 2.0, 2.0, 4.0, 4.0]);
        let merged = a.merged();
        assert_eq!(merged.multiplicities(), vec![1, 4, 4]);
        compare_spectra(&merged, &numeric_spectrum(&m, 5).unwrap(), 1e-10).unwrap();
    }

    #[test]
    fn grouping() {
        assert_eq!(
            group_sorted(&[0.0, 1e-12, 1.0, 1.0, 2.5], 1e-9),
            vec![(0.0, 2), (1.0, 2), (2.5, 1)]
        );
    }

    #[test]
    fn ground_orbit_lambda3() {
        let m = reference(3, 20);
        let s = analytic_spectrum(&m, 2).unwrap();
        let orbit = supercharge_orbit(&m, s.ground());
        let killed: Vec<_> = orbit.annihilated().iter().map(|s| (s.block, s.n)).collect();
        assert_eq!(killed, vec![(1, 0), (2, 0)]);
        let t = &orbit.transitions[1];
        assert_eq!(t.to.map(|s| (s.block, s.n)), Some((2, 0)));
        assert_eq!(ground_orbit_factor(&m, 2), Some(Complex64::new(1.0, 0.0)));
        assert_eq!(ground_orbit_factor(&m, 1), None);
        assert_eq!(ground_orbit_factor(&m, 3), None);
    }

    #[test]
    fn engineered_zero_kills_ground_orbit() {
        let f = vec![
            ComponentFunction::shifted(1.0),
            ComponentFunction::one(),
            ComponentFunction::one(),
        ];
        let m = model(3, 20, f);
        let s = analytic_spectrum(&m, 2).unwrap();
        assert_eq!(supercharge_orbit(&m, s.ground()).annihilated().len(), 3);
    }

    #[test]
    fn excited_orbits_are_cycles() {
        for lambda in 2..=5 {
            let m = reference(lambda, 8 * lambda);
            let s = analytic_spectrum(&m, 4).unwrap();
            for level in &s.levels[1..] {
                assert!(
                    supercharge_orbit(&m, level).is_single_cycle(),
                    "lambda {lambda}"
                );
            }
        }
    }
}
