use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FssqmError, Result};

pub const MAX_POLY_DEGREE: usize = 8;

/// A complex function of the occupation number, `n ↦ f(n)`.
///
/// Polynomials list coefficients in ascending powers of `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentFunction {
    Poly { coeffs: Vec<Complex64> },
    Table { values: Vec<Complex64> },
}

impl ComponentFunction {
    pub fn constant(c: f64) -> Self {
        Self::Poly {
            coeffs: vec![Complex64::new(c, 0.0)],
        }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// `n − shift`, used to engineer a zero at `n = shift`.
    pub fn shifted(shift: f64) -> Self {
        Self::Poly {
            coeffs: vec![Complex64::new(-shift, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn poly(coeffs: impl Into<Vec<Complex64>>) -> Self {
        Self::Poly {
            coeffs: coeffs.into(),
        }
    }

    pub fn table(values: impl Into<Vec<Complex64>>) -> Self {
        Self::Table {
            values: values.into(),
        }
    }

    /// Checks that the function can be evaluated on `0..=max_n`.
    pub fn validate(&self, max_n: usize) -> Result<()> {
        match self {
            Self::Poly { coeffs } => {
                if coeffs.len() > MAX_POLY_DEGREE + 1 {
                    return Err(FssqmError::PolynomialDegree(coeffs.len() - 1));
                }
            }
            Self::Table { values } => {
                if values.len() <= max_n {
                    return Err(FssqmError::TableTooShort {
                        what: "component function values",
                        len: values.len(),
                        n: max_n,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, n: usize) -> Complex64 {
        match self {
            Self::Poly { coeffs } => {
                let x = n as f64;
                coeffs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
            }
            Self::Table { values } => values[n],
        }
    }
}
