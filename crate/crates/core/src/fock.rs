//! Truncated Fock-space representation of a generalized deformed oscillator
//! algebra together with its Z_λ grading.
//!
//! The structure function `F` fixes the ladder amplitudes,
//! `a†|n⟩ = √F(n+1)|n+1⟩` and `a|n⟩ = √F(n)|n−1⟩`, and the commutator
//! `[a, a†] = G(N)` with `G(n) = F(n+1) − F(n)`. The grading operator
//! `T = exp(2πiN/λ)` and the projectors `P_μ` split the space by the residue of
//! `n` modulo λ.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FssqmError, Result};
use crate::matrix::CMatrix;
use crate::residual::scaled_difference;

/// Tolerance on `Σ α_μ = 0` for the C_λ-extended family.
pub const ALPHA_SUM_TOL: f64 = 1e-12;

/// `exp(2πi·k/order)`, exact for the quarter turns.
pub fn root_of_unity(order: usize, k: i64) -> Complex64 {
    let order = order as i64;
    let r = k.rem_euclid(order);
    if (4 * r) % order == 0 {
        match 4 * r / order {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / order as f64)
    }
}

/// How the structure function of the algebra is specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StructureFunctionSpec {
    /// `G(N) = I`, hence `F(N) = N`.
    Oscillator,
    /// `G(N) = I + Σ_μ α_μ P_μ` with `Σ_μ α_μ = 0`; the grading order is
    /// `alpha.len()`.
    CLambdaExtended { alpha: Vec<f64> },
    /// Explicit `F(0), F(1), …`.
    Table { values: Vec<f64> },
}

impl StructureFunctionSpec {
    pub fn c_lambda_extended(alpha: impl Into<Vec<f64>>) -> Self {
        Self::CLambdaExtended {
            alpha: alpha.into(),
        }
    }
}

/// Tabulated `F(0..=n_max)`, read as zero at negative arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTable {
    values: Vec<f64>,
}

impl StructureTable {
    /// `F(m)`; zero for `m < 0`.
    ///
    /// Panics when `m` lies beyond the tabulated range.
    pub fn value(&self, m: i64) -> f64 {
        if m < 0 {
            return 0.0;
        }
        let idx = m as usize;
        assert!(
            idx < self.values.len(),
            "F({m}) requested but only F(0..={}) is tabulated",
            self.values.len() - 1
        );
        self.values[idx]
    }

    /// `G(n) = F(n+1) − F(n)`.
    pub fn g(&self, n: usize) -> f64 {
        self.value(n as i64 + 1) - self.value(n as i64)
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Evaluates `F(0..=n_max)` and validates `F(0) = 0`, `F(n) > 0` for
/// `1 ≤ n ≤ n_max`.
pub fn eval_structure_function(
    spec: &StructureFunctionSpec,
    n_max: usize,
) -> Result<StructureTable> {
    let values: Vec<f64> = match spec {
        StructureFunctionSpec::Oscillator => (0..=n_max).map(|n| n as f64).collect(),
        StructureFunctionSpec::CLambdaExtended { alpha } => {
            if alpha.len() < 2 {
                return Err(FssqmError::InvalidLambda(alpha.len()));
            }
            let sum: f64 = alpha.iter().sum();
            if sum.abs() > ALPHA_SUM_TOL {
                return Err(FssqmError::AlphaSum { sum });
            }
            let mut values = Vec::with_capacity(n_max + 1);
            let mut f = 0.0;
            values.push(f);
            for n in 0..n_max {
                f += 1.0 + alpha[n % alpha.len()];
                values.push(f);
            }
            values
        }
        StructureFunctionSpec::Table { values } => {
            if values.len() < n_max + 1 {
                return Err(FssqmError::TableTooShort {
                    what: "structure function values",
                    len: values.len(),
                    n: n_max,
                });
            }
            if values[0] != 0.0 {
                return Err(FssqmError::Precondition(format!(
                    "tabulated structure function must have F(0) = 0, got {}",
                    values[0]
                )));
            }
            values[..=n_max].to_vec()
        }
    };

    for (n, &v) in values.iter().enumerate().skip(1) {
        if !v.is_finite() {
            return Err(FssqmError::Overflow { n });
        }
        if v <= 0.0 {
            return Err(FssqmError::Positivity { n, value: v });
        }
    }
    Ok(StructureTable { values })
}

/// Truncated Fock representation on `|0⟩..|dim−1⟩`.
#[derive(Debug, Clone)]
pub struct FockRep {
    pub dim: usize,
    pub lambda: usize,
    /// `F` tabulated on `0..=dim+λ−1`, far enough for every block formula.
    pub f_table: StructureTable,
    pub number: CMatrix,
    pub lower: CMatrix,
    pub raise: CMatrix,
    pub grading: CMatrix,
    pub projectors: Vec<CMatrix>,
    /// Identities are exact on `|0⟩..|safe_dim−1⟩`.
    pub safe_dim: usize,
    pub q: Complex64,
}

impl FockRep {
    /// `q^k` for the principal root `q = exp(2πi/λ)`.
    pub fn q_pow(&self, k: i64) -> Complex64 {
        root_of_unity(self.lambda, k)
    }

    /// `F(m)` with the zero extension to negative `m`.
    pub fn f(&self, m: i64) -> f64 {
        self.f_table.value(m)
    }

    /// Largest index for which `F` is tabulated.
    pub fn horizon(&self) -> usize {
        self.f_table.n_max()
    }

    pub fn safe_columns(&self) -> Vec<usize> {
        (0..self.safe_dim).collect()
    }

    /// Projector onto `n ≡ mu (mod λ)`, any integer `mu`.
    pub fn projector(&self, mu: i64) -> &CMatrix {
        &self.projectors[mu.rem_euclid(self.lambda as i64) as usize]
    }

    /// `T⁻¹ = T†`.
    pub fn grading_inverse(&self) -> CMatrix {
        self.grading.adjoint()
    }

    /// `(a†)^k`.
    pub fn raise_power(&self, k: usize) -> CMatrix {
        let mut out = CMatrix::identity(self.dim);
        for _ in 0..k {
            out = &out * &self.raise;
        }
        out
    }

    /// Diagonal matrix `diag(f(0), …, f(dim−1))`.
    pub fn diag_fn(&self, f: impl Fn(usize) -> Complex64) -> CMatrix {
        CMatrix::from_diag(&(0..self.dim).map(f).collect::<Vec<_>>())
    }
}

/// Builds `N`, `a`, `a†`, `T` and the projectors on a `dim`-dimensional
/// truncation, with `safe_dim = dim − 2λ`.
pub fn build_fock_rep(spec: &StructureFunctionSpec, lambda: usize, dim: usize) -> Result<FockRep> {
    if lambda < 2 {
        return Err(FssqmError::InvalidLambda(lambda));
    }
    if dim < 4 * lambda {
        return Err(FssqmError::InsufficientDimension {
            required: 4 * lambda,
            actual: dim,
        });
    }
    if let StructureFunctionSpec::CLambdaExtended { alpha } = spec {
        if alpha.len() != lambda {
            return Err(FssqmError::LengthMismatch {
                what: "alpha parameters",
                expected: lambda,
                actual: alpha.len(),
            });
        }
    }

    let f_table = eval_structure_function(spec, dim + lambda - 1)?;
    let number = CMatrix::from_real_diag(&(0..dim).map(|n| n as f64).collect::<Vec<_>>());
    let mut lower = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        lower[(n - 1, n)] = Complex64::new(f_table.value(n as i64).sqrt(), 0.0);
    }
    let raise = lower.adjoint();
    let grading = CMatrix::from_diag(
        &(0..dim)
            .map(|n| root_of_unity(lambda, n as i64))
            .collect::<Vec<_>>(),
    );

    let mut rep = FockRep {
        dim,
        lambda,
        f_table,
        number,
        lower,
        raise,
        grading,
        projectors: Vec::new(),
        safe_dim: dim - 2 * lambda,
        q: root_of_unity(lambda, 1),
    };
    rep.projectors = build_projectors(&rep);
    Ok(rep)
}

/// `P_μ = (1/λ) Σ_ν q^{−μν} T^ν`, μ = 0..λ−1.
///
/// The sum is evaluated entry by entry on the diagonal of `T`; the results are
/// 0/1 up to round-off and are stored as exact residue selectors.
pub fn build_projectors(rep: &FockRep) -> Vec<CMatrix> {
    let lambda = rep.lambda;
    let t_diag = rep.grading.diagonal();
    (0..lambda)
        .map(|mu| {
            let diag: Vec<Complex64> = t_diag
                .iter()
                .map(|&t| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut t_pow = Complex64::new(1.0, 0.0);
                    for nu in 0..lambda {
                        acc += root_of_unity(lambda, -((mu * nu) as i64)) * t_pow;
                        t_pow *= t;
                    }
                    let p = acc / lambda as f64;
                    debug_assert!(
                        p.im.abs() < 1e-12 && (p.re.abs() < 1e-12 || (p.re - 1.0).abs() < 1e-12)
                    );
                    Complex64::new(p.re.round(), 0.0)
                })
                .collect();
            CMatrix::from_diag(&diag)
        })
        .collect()
}

/// One named residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedResidual {
    pub name: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradingReport {
    pub residuals: Vec<NamedResidual>,
    pub tolerance: f64,
}

impl GradingReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.tolerance
    }
}

/// Residuals of the grading and projector shift relations on the safe block.
pub fn check_grading_relations(rep: &FockRep, tol: f64) -> GradingReport {
    let cols = rep.safe_columns();
    let q = rep.q;
    let (n, a, ad, t) = (&rep.number, &rep.lower, &rep.raise, &rep.grading);
    let mut residuals = vec![
        NamedResidual {
            name: "[N, T] = 0".into(),
            residual: scaled_difference(&(n * t), &(t * n), &cols),
        },
        NamedResidual {
            name: "a† T = q⁻¹ T a†".into(),
            residual: scaled_difference(&(ad * t), &(t * ad).scale(q.inv()), &cols),
        },
        NamedResidual {
            name: "a T = q T a".into(),
            residual: scaled_difference(&(a * t), &(t * a).scale(q), &cols),
        },
    ];
    let mut np = 0.0f64;
    let mut adp = 0.0f64;
    let mut ap = 0.0f64;
    for mu in 0..rep.lambda as i64 {
        let p = rep.projector(mu);
        np = np.max(scaled_difference(&(n * p), &(p * n), &cols));
        adp = adp.max(scaled_difference(
            &(ad * p),
            &(rep.projector(mu + 1) * ad),
            &cols,
        ));
        ap = ap.max(scaled_difference(
            &(a * p),
            &(rep.projector(mu - 1) * a),
            &cols,
        ));
    }
    residuals.push(NamedResidual {
        name: "[N, P_μ] = 0".into(),
        residual: np,
    });
    residuals.push(NamedResidual {
        name: "a† P_μ = P_{μ+1} a†".into(),
        residual: adp,
    });
    residuals.push(NamedResidual {
        name: "a P_μ = P_{μ−1} a".into(),
        residual: ap,
    });
    GradingReport {
        residuals,
        tolerance: tol,
    }
}
