//! Dual vectors `x = x_s + x_d ε` and square dual matrices `A = A_s + A_d ε`.

use rayon::prelude::*;

use crate::dual::DualNumber;
use crate::error::{Error, Result};
use crate::real::{dot, norm2, Lu, Matrix};

/// Row count at which `matvec` switches to a row-parallel loop.
const PAR_ROWS: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct DualVector {
    standard: Vec<f64>,
    dual: Vec<f64>,
}

impl DualVector {
    pub fn new(standard: Vec<f64>, dual: Vec<f64>) -> Result<Self> {
        if standard.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if standard.len() != dual.len() {
            return Err(Error::DimensionMismatch { expected: standard.len(), found: dual.len() });
        }
        if let Some(&v) = standard.iter().chain(&dual).find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(v));
        }
        Ok(DualVector { standard, dual })
    }

    /// Purely standard vector (dual part zero).
    pub fn from_standard(standard: Vec<f64>) -> Result<Self> {
        let n = standard.len();
        Self::new(standard, vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.standard.len()
    }

    pub fn is_empty(&self) -> bool {
        self.standard.is_empty()
    }

    pub fn standard(&self) -> &[f64] {
        &self.standard
    }

    pub fn dual(&self) -> &[f64] {
        &self.dual
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.standard, self.dual)
    }

    pub fn get(&self, i: usize) -> DualNumber {
        DualNumber { standard: self.standard[i], dual: self.dual[i] }
    }

    pub fn is_appreciable(&self) -> bool {
        self.standard.iter().any(|&v| v != 0.0)
    }

    /// Dual 2-norm: `‖x_s‖ + (x_sᵀx_d/‖x_s‖) ε`, or `‖x_d‖ ε` when `x_s = 0`.
    pub fn norm2(&self) -> DualNumber {
        let ns = norm2(&self.standard);
        if ns != 0.0 {
            DualNumber { standard: ns, dual: dot(&self.standard, &self.dual) / ns }
        } else {
            DualNumber { standard: 0.0, dual: norm2(&self.dual) }
        }
    }

    /// `x / ‖x‖₂`, a unit dual vector.
    ///
    /// For a non-appreciable input the standard part becomes `x_d/‖x_d‖` and the
    /// (otherwise free) dual part is set to zero.
    pub fn normalize(&self) -> Result<DualVector> {
        let ns = norm2(&self.standard);
        if ns != 0.0 {
            let proj = dot(&self.standard, &self.dual) / (ns * ns * ns);
            let standard = self.standard.iter().map(|v| v / ns).collect();
            let dual = self
                .dual
                .iter()
                .zip(&self.standard)
                .map(|(d, s)| d / ns - s * proj)
                .collect();
            Ok(DualVector { standard, dual })
        } else {
            let nd = norm2(&self.dual);
            if nd == 0.0 {
                return Err(Error::ZeroVector);
            }
            Ok(DualVector {
                standard: self.dual.iter().map(|v| v / nd).collect(),
                dual: vec![0.0; self.len()],
            })
        }
    }

    /// `‖x_s‖ = 1` and `|x_sᵀx_d| ≤ tol`.
    pub fn is_unit(&self, tol: f64) -> bool {
        (norm2(&self.standard) - 1.0).abs() <= tol && dot(&self.standard, &self.dual).abs() <= tol
    }

    /// Scalar multiple `a·x` for a dual scalar `a`.
    pub fn scale(&self, a: DualNumber) -> DualVector {
        let standard = self.standard.iter().map(|s| a.standard * s).collect();
        let dual = self
            .standard
            .iter()
            .zip(&self.dual)
            .map(|(s, d)| a.standard * d + a.dual * s)
            .collect();
        DualVector { standard, dual }
    }

    pub fn add(&self, other: &DualVector) -> Result<DualVector> {
        self.check_len(other)?;
        Ok(DualVector {
            standard: self.standard.iter().zip(&other.standard).map(|(a, b)| a + b).collect(),
            dual: self.dual.iter().zip(&other.dual).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &DualVector) -> Result<DualVector> {
        self.add(&other.scale(DualNumber { standard: -1.0, dual: 0.0 }))
    }

    /// `√(‖x_s‖² + ‖x_d‖²)`: the F^R-norm of `x` viewed as an n×1 matrix.
    pub fn frn_norm(&self) -> f64 {
        (dot(&self.standard, &self.standard) + dot(&self.dual, &self.dual)).sqrt()
    }

    fn check_len(&self, other: &DualVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualMatrix {
    standard: Matrix,
    dual: Matrix,
}

impl DualMatrix {
    pub fn new(standard: Matrix, dual: Matrix) -> Result<Self> {
        if !standard.is_square() {
            return Err(Error::NotSquare { rows: standard.rows(), cols: standard.cols() });
        }
        if !dual.is_square() {
            return Err(Error::NotSquare { rows: dual.rows(), cols: dual.cols() });
        }
        if standard.rows() != dual.rows() {
            return Err(Error::DimensionMismatch { expected: standard.rows(), found: dual.rows() });
        }
        if standard.rows() == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some(&v) = standard.as_slice().iter().chain(dual.as_slice()).find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(v));
        }
        Ok(DualMatrix { standard, dual })
    }

    pub fn from_rows(standard: &[Vec<f64>], dual: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(standard)?, Matrix::from_rows(dual)?)
    }

    pub fn identity(n: usize) -> Self {
        DualMatrix { standard: Matrix::identity(n), dual: Matrix::zeros(n, n) }
    }

    pub fn n(&self) -> usize {
        self.standard.rows()
    }

    pub fn standard(&self) -> &Matrix {
        &self.standard
    }

    pub fn dual(&self) -> &Matrix {
        &self.dual
    }

    pub fn get(&self, i: usize, j: usize) -> DualNumber {
        DualNumber { standard: self.standard[(i, j)], dual: self.dual[(i, j)] }
    }

    /// `A + ρI` (shift applied to the standard part only).
    pub fn shifted(&self, rho: f64) -> DualMatrix {
        DualMatrix { standard: self.standard.shifted(rho), dual: self.dual.clone() }
    }

    /// Dual row sums `Σ_j a_ij`.
    pub fn row_sums(&self) -> Vec<DualNumber> {
        (0..self.n())
            .map(|i| DualNumber {
                standard: self.standard.row(i).iter().sum(),
                dual: self.dual.row(i).iter().sum(),
            })
            .collect()
    }

    /// `A·x = A_s x_s + (A_s x_d + A_d x_s) ε`.
    ///
    /// Rows are processed in parallel for large `n`; each row's dot products
    /// are evaluated sequentially so the result does not depend on the number
    /// of threads.
    pub fn matvec(&self, x: &DualVector) -> Result<DualVector> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let row = |i: usize| {
            let s = self.standard.row(i);
            let d = self.dual.row(i);
            (dot(s, &x.standard), dot(s, &x.dual) + dot(d, &x.standard))
        };
        let pairs: Vec<(f64, f64)> = if n >= PAR_ROWS {
            (0..n).into_par_iter().map(row).collect()
        } else {
            (0..n).map(row).collect()
        };
        let (standard, dual) = pairs.into_iter().unzip();
        Ok(DualVector { standard, dual })
    }

    /// `A⁻¹ = A_s⁻¹ − A_s⁻¹ A_d A_s⁻¹ ε`.
    pub fn inverse(&self) -> Result<DualMatrix> {
        let inv_s = Lu::factor(&self.standard)?.inverse();
        let inv_d = inv_s.matmul(&self.dual).matmul(&inv_s).scaled(-1.0);
        Ok(DualMatrix { standard: inv_s, dual: inv_d })
    }

    /// Dual matrix product.
    pub fn matmul(&self, other: &DualMatrix) -> Result<DualMatrix> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: other.n() });
        }
        let standard = self.standard.matmul(&other.standard);
        let dual = self.standard.matmul(&other.dual).add(&self.dual.matmul(&other.standard));
        Ok(DualMatrix { standard, dual })
    }

    /// `‖A‖_{F^R} = √(‖A_s‖_F² + ‖A_d‖_F²)`.
    pub fn frn_norm(&self) -> f64 {
        self.standard.frobenius_norm().hypot(self.dual.frobenius_norm())
    }

    pub fn into_parts(self) -> (Matrix, Matrix) {
        (self.standard, self.dual)
    }
}
