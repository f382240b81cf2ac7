//! Independent small-scale verification of the Collatz solver.
//!
//! The Perron root comes from a full dense eigensolve of `A_s`, its left and
//! right vectors from inverse iteration, and the dual part from the first-order
//! perturbation formula `λ_d = y_sᵀ A_d x_s / (y_sᵀ x_s)`. None of this shares
//! code with the iteration under test.

use num_complex::Complex64;

use crate::eigen::{eigenvalues, real_eigenvector};
use crate::error::{Error, Result};
use crate::linalg::DualMatrix;
use crate::real::{dot, Matrix};

/// Largest order the oracle accepts.
pub const ORACLE_MAX_N: usize = 200;

/// Default central-difference step for [`fd_check`].
pub const FD_STEP: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    /// `max |μ|` over the spectrum.
    pub spectral_radius: f64,
    /// Index into `eigenvalues` of the Perron root.
    pub perron_index: usize,
    /// Perron root refined by the two-sided Rayleigh quotient.
    pub perron_value: f64,
    pub right_vector: Vec<f64>,
    pub left_vector: Vec<f64>,
}

/// Spectrum of `A_s` with its Perron root and positive left/right vectors.
pub fn spectrum(a: &Matrix) -> Result<SpectrumReport> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge { n, limit: ORACLE_MAX_N });
    }
    let eigenvalues = eigenvalues(a)?;
    let spectral_radius = eigenvalues.iter().map(|e| e.norm()).fold(0.0, f64::max);

    // The Perron root has the largest real part of all eigenvalues.
    let perron_index = (0..n)
        .max_by(|&i, &j| {
            eigenvalues[i]
                .re
                .total_cmp(&eigenvalues[j].re)
                .then(eigenvalues[j].im.abs().total_cmp(&eigenvalues[i].im.abs()))
        })
        .expect("n >= 1");
    let mu = eigenvalues[perron_index];
    if !(mu.re > 0.0) || mu.im.abs() > 1e-8 * spectral_radius {
        return Err(Error::NoPositivePerronVector);
    }

    // An irreducible nonnegative matrix has a simple Perron root.
    let cluster = 1e-8 * spectral_radius.max(f64::MIN_POSITIVE);
    if eigenvalues.iter().filter(|e| (**e - mu).norm() <= cluster).count() > 1 {
        return Err(Error::NoPositivePerronVector);
    }

    let right_vector = real_eigenvector(a, mu.re);
    let at = a.transpose();
    let left_vector = real_eigenvector(&at, mu.re);
    let scale = a.frobenius_norm();
    for (m, v) in [(a, &right_vector), (&at, &left_vector)] {
        let max = v.iter().cloned().fold(0.0, f64::max);
        if v.iter().any(|&x| !(x > 1e-13 * max)) {
            return Err(Error::NoPositivePerronVector);
        }
        let res: f64 = m.mul_vec(v).iter().zip(v.iter()).map(|(p, q)| (p - mu.re * q).powi(2)).sum::<f64>().sqrt();
        if res > 1e-8 * scale {
            return Err(Error::NoPositivePerronVector);
        }
    }
    let ax = a.mul_vec(&right_vector);
    let perron_value = dot(&left_vector, &ax) / dot(&left_vector, &right_vector);

    Ok(SpectrumReport { eigenvalues, spectral_radius, perron_index, perron_value, right_vector, left_vector })
}

/// `λ_d = y_sᵀ A_d x_s / (y_sᵀ x_s)` for the Perron pair in `report`.
pub fn lambda_d_oracle(a: &DualMatrix, report: &SpectrumReport) -> f64 {
    dual_part_formula(a.dual(), &report.left_vector, &report.right_vector)
}

fn dual_part_formula(dual: &Matrix, left: &[f64], right: &[f64]) -> f64 {
    dot(left, &dual.mul_vec(right)) / dot(left, right)
}

/// Dual part attached to any simple real eigenvalue `mu_s` of `A_s`, by the same
/// left/right-vector formula.
pub fn eigenvalue_dual_part(a: &DualMatrix, mu_s: f64) -> Result<f64> {
    let n = a.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge { n, limit: ORACLE_MAX_N });
    }
    let right = real_eigenvector(a.standard(), mu_s);
    let left = real_eigenvector(&a.standard().transpose(), mu_s);
    let denom = dot(&left, &right);
    if denom.abs() < 1e-10 {
        return Err(Error::RankDeficient);
    }
    Ok(dual_part_formula(a.dual(), &left, &right))
}

/// Continuation of the Perron root of `A_s + t A_d`: the eigenvalue nearest `anchor`.
fn perturbed_root(a: &DualMatrix, t: f64, anchor: f64) -> Result<f64> {
    let m = a.standard().add(&a.dual().scaled(t));
    let ev = eigenvalues(&m)?;
    let target = Complex64::new(anchor, 0.0);
    let nearest = ev
        .iter()
        .min_by(|x, y| (*x - target).norm().total_cmp(&(*y - target).norm()))
        .expect("non-empty spectrum");
    Ok(nearest.re)
}

/// `|fd − λ_d|` with `fd` the central difference of the Perron root of
/// `A_s + t A_d` at `t = 0`.
pub fn fd_check(a: &DualMatrix, report: &SpectrumReport, t: f64) -> Result<f64> {
    let plus = perturbed_root(a, t, report.perron_value)?;
    let minus = perturbed_root(a, -t, report.perron_value)?;
    let fd = (plus - minus) / (2.0 * t);
    Ok((fd - lambda_d_oracle(a, report)).abs())
}
