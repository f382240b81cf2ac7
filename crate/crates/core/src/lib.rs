//! Perron and Perron-Frobenius eigenpairs of dual number matrices.
//!
//! A dual number matrix `A = A_s + A_d ε` whose standard part is irreducible
//! nonnegative has a positive dual eigenvalue `λ = λ_s + λ_d ε` with a positive
//! eigenvector. This crate computes it with the shifted Collatz iteration,
//! which brackets `λ` between monotone min/max ratio bounds, and provides the
//! surrounding machinery:
//!
//! * [`dual`]: scalar dual numbers with the lexicographic total order;
//! * [`linalg`]: dual vectors and matrices;
//! * [`structure`]: irreducibility, period and primitivity of `A_s`;
//! * [`solver`]: the iteration itself;
//! * [`oracle`]: an independent dense-eigensolver check;
//! * [`generators`]: standard test families;
//! * [`io`]: JSON and CSV formats.
//!
//! ```
//! use dual_perron::{generate, solve, ExampleSpec, SolverConfig};
//!
//! let a = generate(&ExampleSpec::ex2([1.0, 1.0, 1.0, 1.0])).unwrap();
//! let r = solve(&a, &SolverConfig::default()).unwrap();
//! let lambda = r.lambda.unwrap();
//! assert!((lambda.standard - 1.0).abs() < 1e-12);
//! assert!((lambda.dual - 2.0).abs() < 1e-12);
//! ```

pub mod dual;
pub mod eigen;
pub mod error;
pub mod generators;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod real;
pub mod solver;
pub mod structure;

pub use dual::DualNumber;
pub use error::{Error, Result};
pub use generators::{generate, ExampleId, ExampleSpec};
pub use linalg::{DualMatrix, DualVector};
pub use real::Matrix;
pub use solver::{solve, Flag, PerronResult, SolverConfig};
pub use structure::{classify, wielandt_check, StructureReport};
