//! Test matrices: the two fixed 2×2 examples and the four scalable families.
//!
//! Formulas use 1-based indices; storage is 0-based.
//!
//! | id     | standard part                                             | dual part            |
//! |--------|-----------------------------------------------------------|----------------------|
//! | `ex1`  | `[[1,1],[0,1]]`                                           | `[[0,0],[1,0]]`      |
//! | `ex2`  | `[[0,1],[1,0]]`                                           | `[[a,b],[c,d]]`      |
//! | `ex51` | `a_1i = a_i1 = 1` (i ≥ 2), zero elsewhere                 | Jordan block         |
//! | `ex52` | `a_ij = i + j` for i ≠ j, zero diagonal                   | Jordan block         |
//! | `ex53` | `a_1n = 1`, `a_i1 = 1` (i ≥ 2), `a_ni = 1` (i < n)        | Jordan block         |
//! | `ex54` | i.i.d. uniform on `[0.1, 1.1]`                            | i.i.d. standard normal |
//!
//! The Jordan block has ones on the diagonal and the superdiagonal.
//! `ex54` draws from [`SplitMix64`]; see its docs for the exact stream.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::DualMatrix;
use crate::real::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex51,
    Ex52,
    Ex53,
    Ex54,
}

impl ExampleId {
    pub const ALL: [ExampleId; 6] =
        [ExampleId::Ex1, ExampleId::Ex2, ExampleId::Ex51, ExampleId::Ex52, ExampleId::Ex53, ExampleId::Ex54];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex51 => "ex51",
            ExampleId::Ex52 => "ex52",
            ExampleId::Ex53 => "ex53",
            ExampleId::Ex54 => "ex54",
        }
    }

    /// Label used in result tables (`5.1`, ...).
    pub fn label(self) -> &'static str {
        match self {
            ExampleId::Ex1 => "1",
            ExampleId::Ex2 => "2",
            ExampleId::Ex51 => "5.1",
            ExampleId::Ex52 => "5.2",
            ExampleId::Ex53 => "5.3",
            ExampleId::Ex54 => "5.4",
        }
    }

    pub fn is_fixed_size(self) -> bool {
        matches!(self, ExampleId::Ex1 | ExampleId::Ex2)
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name() == key || id.label() == key)
            .ok_or_else(|| Error::BadSpec(format!("unknown example '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleSpec {
    pub id: ExampleId,
    pub n: usize,
    /// `(a, b, c, d)` for `ex2`; ignored otherwise.
    pub params: [f64; 4],
    /// Stream seed for `ex54`; ignored otherwise.
    pub seed: u64,
}

impl ExampleSpec {
    pub fn new(id: ExampleId, n: usize) -> Self {
        let n = if id.is_fixed_size() { 2 } else { n };
        ExampleSpec { id, n, params: [1.0; 4], seed: 0 }
    }

    pub fn ex2(params: [f64; 4]) -> Self {
        ExampleSpec { params, ..Self::new(ExampleId::Ex2, 2) }
    }

    pub fn ex54(n: usize, seed: u64) -> Self {
        ExampleSpec { seed, ..Self::new(ExampleId::Ex54, n) }
    }

    fn validate(&self) -> Result<()> {
        if self.id.is_fixed_size() {
            if self.n != 2 {
                return Err(Error::BadSpec(format!("{} is fixed at n = 2, got n = {}", self.id, self.n)));
            }
        } else if self.n < 2 {
            return Err(Error::BadSpec(format!("{} needs n >= 2, got n = {}", self.id, self.n)));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(Error::BadSpec("non-finite ex2 parameter".into()));
        }
        Ok(())
    }
}

/// Builds the dual matrix described by `spec`.
pub fn generate(spec: &ExampleSpec) -> Result<DualMatrix> {
    spec.validate()?;
    let n = spec.n;
    let (standard, dual) = match spec.id {
        ExampleId::Ex1 => (
            Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]])?,
            Matrix::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]])?,
        ),
        ExampleId::Ex2 => {
            let [a, b, c, d] = spec.params;
            (Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])?, Matrix::from_rows(&[vec![a, b], vec![c, d]])?)
        }
        ExampleId::Ex51 => (
            Matrix::from_fn(n, n, |i, j| if (i == 0) != (j == 0) { 1.0 } else { 0.0 }),
            jordan_block(n),
        ),
        ExampleId::Ex52 => (
            Matrix::from_fn(n, n, |i, j| if i != j { (i + 1 + j + 1) as f64 } else { 0.0 }),
            jordan_block(n),
        ),
        ExampleId::Ex53 => (
            Matrix::from_fn(n, n, |i, j| {
                let first_col = j == 0 && i >= 1;
                let corner = i == 0 && j == n - 1;
                let last_row = i == n - 1 && j < n - 1;
                if first_col || corner || last_row {
                    1.0
                } else {
                    0.0
                }
            }),
            jordan_block(n),
        ),
        ExampleId::Ex54 => {
            let mut rng = SplitMix64::new(spec.seed);
            let standard = Matrix::from_fn(n, n, |_, _| 0.1 + rng.next_f64());
            let dual = Matrix::from_fn(n, n, |_, _| rng.next_normal());
            (standard, dual)
        }
    };
    DualMatrix::new(standard, dual)
}

/// Ones on the diagonal and superdiagonal.
fn jordan_block(n: usize) -> Matrix {
    Matrix::from_fn(n, n, |i, j| if j == i || j == i + 1 { 1.0 } else { 0.0 })
}

/// SplitMix64 (Steele, Lea & Flood, 2014).
///
/// State advances by `0x9E3779B97F4A7C15`; output mixes with the
/// `0xBF58476D1CE4E5B9` / `0x94D049BB133111EB` finalizer. Uniforms take the
/// top 53 bits: `u = (x >> 11) · 2⁻⁵³ ∈ [0, 1)`. Normals use one Box–Muller
/// draw per pair of uniforms, keeping only the cosine branch:
/// `z = √(−2 ln(1 − u₁)) · cos(2π u₂)`.
///
/// `ex54` fills the standard part row-major first, then the dual part.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
