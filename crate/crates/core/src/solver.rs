//! Shifted Collatz iteration for the Perron / Perron-Frobenius eigenpair of a
//! dual number matrix with an irreducible nonnegative standard part.
//!
//! The iteration runs on `B = A + ρI`, whose standard part is primitive for any
//! `ρ > 0`. Each step forms `y = Bx`, takes the dual-number ratios `y_i / x_i`
//! and records their minimum and maximum under the lexicographic order; these
//! bracket the (shifted) eigenvalue and tighten monotonically. The next iterate
//! is `y / ‖y‖₂`.
//!
//! Termination:
//! * flag 1: `‖λ̄ − λ̲‖_{F^R} ≤ ‖A‖_{F^R} δ₁`, eigenvalue `λ̲ − ρ`;
//! * flag 2: only the standard gap is below `‖A‖_{F^R} δ₂`; the dual parts
//!   `(λ_d, x_d)` are then recovered from a bordered linear system;
//! * flag 0: `k_max` steps without either.
//!
//! All bounds reported to callers are de-shifted.

use serde::Serialize;

use crate::dual::DualNumber;
use crate::error::{Error, Result};
use crate::linalg::{DualMatrix, DualVector};
use crate::real::{norm2, Lu, Matrix};
use crate::structure::classify;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub k_max: usize,
    /// Full dual-number stopping tolerance, relative to `‖A‖_{F^R}`.
    pub delta1: f64,
    /// Standard-part stopping tolerance, relative to `‖A‖_{F^R}`.
    pub delta2: f64,
    /// Shift `ρ > 0`.
    pub rho: f64,
    /// Initial iterate; defaults to all-ones standard part with zero dual part.
    pub x0: Option<DualVector>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { k_max: 2000, delta1: 1e-8, delta2: 1e-12, rho: 1.0, x0: None }
    }
}

impl SolverConfig {
    pub fn with_rho(rho: f64) -> Self {
        SolverConfig { rho, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.delta1) {
            return Err(Error::InvalidConfig(format!("delta1 must be positive, got {}", self.delta1)));
        }
        if !positive(self.delta2) {
            return Err(Error::InvalidConfig(format!("delta2 must be positive, got {}", self.delta2)));
        }
        if !positive(self.rho) {
            return Err(Error::InvalidConfig(format!("shift must be positive, got {}", self.rho)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[repr(u8)]
pub enum Flag {
    NotConverged = 0,
    ConvergedFull = 1,
    ConvergedStandard = 2,
}

impl Flag {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// One row of the iteration trace. Bounds are de-shifted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    pub lower: DualNumber,
    pub upper: DualNumber,
    /// `‖upper − lower‖_{F^R}`.
    pub gap_frn: f64,
    /// `‖A x⁽ᵏ⁾ − λ̲_k x⁽ᵏ⁾‖_{F^R}`.
    pub residual_frn: f64,
}

#[derive(Clone, Debug)]
pub struct PerronResult {
    pub flag: Flag,
    /// De-shifted eigenvalue; `None` iff `flag` is [`Flag::NotConverged`].
    pub lambda: Option<DualNumber>,
    /// Unit eigenvector; `None` iff `flag` is [`Flag::NotConverged`].
    pub x: Option<DualVector>,
    /// Bounds for `k = 0..=iterations`.
    pub trace: Vec<IterationRecord>,
    pub iterations: usize,
    /// `‖Ax − λx‖_{F^R}` for the returned pair.
    pub residual: Option<f64>,
    pub rho: f64,
}

impl PerronResult {
    pub fn converged(&self) -> bool {
        self.flag != Flag::NotConverged
    }

    pub fn lower_bounds(&self) -> impl Iterator<Item = DualNumber> + '_ {
        self.trace.iter().map(|r| r.lower)
    }

    pub fn upper_bounds(&self) -> impl Iterator<Item = DualNumber> + '_ {
        self.trace.iter().map(|r| r.upper)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CollatzStep {
    pub x_next: DualVector,
    pub lower: DualNumber,
    pub upper: DualNumber,
}

/// `y = Bx` and the min/max of `y_i / x_i`; ties go to the lowest index.
fn ratio_bounds(b: &DualMatrix, x: &DualVector) -> Result<(DualVector, DualNumber, DualNumber)> {
    if let Some(i) = x.standard().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveIterate(i));
    }
    let y = b.matvec(x)?;
    let (lower, upper) = min_max_ratios(&y, x)?;
    Ok((y, lower, upper))
}

fn min_max_ratios(y: &DualVector, x: &DualVector) -> Result<(DualNumber, DualNumber)> {
    let mut lower = y.get(0).checked_div(x.get(0))?;
    let mut upper = lower;
    for i in 1..x.len() {
        let r = y.get(i).checked_div(x.get(i))?;
        if r < lower {
            lower = r;
        }
        if r > upper {
            upper = r;
        }
    }
    Ok((lower, upper))
}

/// One Collatz step on `B`: bounds at `x` and the next normalized iterate.
pub fn collatz_step(b: &DualMatrix, x: &DualVector) -> Result<CollatzStep> {
    let (y, lower, upper) = ratio_bounds(b, x)?;
    Ok(CollatzStep { x_next: y.normalize()?, lower, upper })
}

/// Collatz–Wielandt bounds `min_i (Ax)_i/x_i` and `max_i (Ax)_i/x_i`.
pub fn minimax_ratios(a: &DualMatrix, x: &DualVector) -> Result<(DualNumber, DualNumber)> {
    if let Some(i) = x.standard().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveVector(i));
    }
    let y = a.matvec(x)?;
    min_max_ratios(&y, x)
}

/// Smallest and largest dual row sum; they bracket the Perron eigenvalue.
pub fn row_sum_bounds(a: &DualMatrix) -> (DualNumber, DualNumber) {
    let sums = a.row_sums();
    let lower = sums.iter().copied().min().expect("n >= 1");
    let upper = sums.iter().copied().max().expect("n >= 1");
    (lower, upper)
}

/// Recovers `(λ_d, x_d)` from `(A_s − λ_s I) x_d − λ_d x_s = −A_d x_s` with
/// `x_sᵀ x_d = 0`, as one square bordered system in `z = (x_d, −λ_d)`:
///
/// ```text
/// [ A_s − λ_s I   x_s ] [ x_d  ]   [ −A_d x_s ]
/// [ x_sᵀ           0  ] [ −λ_d ] = [    0     ]
/// ```
pub fn solve_dual_part(a: &DualMatrix, lambda_s: f64, x_s: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = a.n();
    if x_s.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x_s.len() });
    }
    let a_s = a.standard();
    let m = Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => a_s[(i, j)] - if i == j { lambda_s } else { 0.0 },
        (true, false) => x_s[i],
        (false, true) => x_s[j],
        (false, false) => 0.0,
    });
    let mut rhs: Vec<f64> = a.dual().mul_vec(x_s).into_iter().map(|v| -v).collect();
    rhs.push(0.0);
    let lu = Lu::factor(&m).map_err(|e| match e {
        Error::SingularStandardPart => Error::RankDeficient,
        other => other,
    })?;
    let mut z = lu.solve(&rhs);
    let lambda_d = -z.pop().expect("n + 1 entries");
    Ok((lambda_d, z))
}

/// `‖Ax − λx‖_{F^R}` with the vector read as an n×1 dual matrix.
pub fn residual_frn(a: &DualMatrix, lambda: DualNumber, x: &DualVector) -> Result<f64> {
    Ok(a.matvec(x)?.sub(&x.scale(lambda))?.frn_norm())
}

/// Runs the shifted Collatz iteration on `A`.
///
/// Refuses inputs whose standard part is not irreducible nonnegative.
pub fn solve(a: &DualMatrix, cfg: &SolverConfig) -> Result<PerronResult> {
    cfg.validate()?;
    let report = classify(a.standard(), cfg.rho)?;
    if !report.nonnegative {
        return Err(Error::StructureViolation("standard part has negative entries".into()));
    }
    if !report.irreducible {
        return Err(Error::StructureViolation("standard part reducible".into()));
    }

    let n = a.n();
    let rho = cfg.rho;
    let shift = DualNumber { standard: rho, dual: 0.0 };
    let b = a.shifted(rho);
    let tol_full = a.frn_norm() * cfg.delta1;
    let tol_standard = a.frn_norm() * cfg.delta2;

    let x0 = match &cfg.x0 {
        Some(x0) => {
            if x0.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
            }
            if let Some(i) = x0.standard().iter().position(|&v| !(v > 0.0)) {
                return Err(Error::NonPositiveVector(i));
            }
            x0.clone()
        }
        None => DualVector::from_standard(vec![1.0; n])?,
    };
    let mut x = x0.normalize()?;

    let record = |k: usize, x: &DualVector, y: &DualVector, lo: DualNumber, up: DualNumber| -> Result<IterationRecord> {
        Ok(IterationRecord {
            k,
            lower: lo - shift,
            upper: up - shift,
            gap_frn: (up - lo).frn_norm(),
            residual_frn: y.sub(&x.scale(lo))?.frn_norm(),
        })
    };

    let (mut y, mut lo, mut up) = ratio_bounds(&b, &x)?;
    let mut trace = vec![record(0, &x, &y, lo, up)?];

    for k in 0..cfg.k_max {
        x = y.normalize()?;
        (y, lo, up) = ratio_bounds(&b, &x)?;
        let rec = record(k + 1, &x, &y, lo, up)?;
        trace.push(rec);

        if rec.gap_frn <= tol_full {
            let lambda = lo - shift;
            let residual = residual_frn(a, lambda, &x)?;
            return Ok(PerronResult {
                flag: Flag::ConvergedFull,
                lambda: Some(lambda),
                x: Some(x),
                trace,
                iterations: k + 1,
                residual: Some(residual),
                rho,
            });
        }
        if (up.standard - lo.standard).abs() <= tol_standard {
            let lambda_s = lo.standard - rho;
            let nrm = norm2(x.standard());
            let x_s: Vec<f64> = x.standard().iter().map(|v| v / nrm).collect();
            let (lambda_d, x_d) = solve_dual_part(a, lambda_s, &x_s)?;
            let lambda = DualNumber { standard: lambda_s, dual: lambda_d };
            let x = DualVector::new(x_s, x_d)?;
            let residual = residual_frn(a, lambda, &x)?;
            return Ok(PerronResult {
                flag: Flag::ConvergedStandard,
                lambda: Some(lambda),
                x: Some(x),
                trace,
                iterations: k + 1,
                residual: Some(residual),
                rho,
            });
        }
    }

    Ok(PerronResult {
        flag: Flag::NotConverged,
        lambda: None,
        x: None,
        trace,
        iterations: cfg.k_max,
        residual: None,
        rho,
    })
}
