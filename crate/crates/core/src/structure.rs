//! Structural classification of a nonnegative standard part.
//!
//! Irreducibility and period come from the digraph with an edge `i → j`
//! whenever `a_ij > 0`. The comparison is exact: entries are inputs, not
//! computed residue.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Matrix;

/// Largest order accepted by [`wielandt_check`].
pub const WIELANDT_MAX_N: usize = 64;

/// Convergence-rate constants for the shifted matrix `A_s + ρI`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateConstants {
    pub beta: f64,
    pub mu_bar: f64,
    /// `1 − β/μ̄`, the per-step contraction factor of the standard-part gap.
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub n: usize,
    pub nonnegative: bool,
    pub irreducible: bool,
    /// Period `h`; `None` unless irreducible.
    pub period: Option<usize>,
    pub primitive: bool,
    pub weakly_positive: bool,
    pub positive: bool,
    pub rho: f64,
    /// Only present when the matrix is weakly positive.
    pub rate: Option<RateConstants>,
}

impl StructureReport {
    /// Nonnegative and irreducible: the precondition of the Collatz solver.
    pub fn is_admissible(&self) -> bool {
        self.nonnegative && self.irreducible
    }

    /// Flat `key=value` rendering, one pair per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        kv("n", self.n.to_string());
        kv("nonnegative", self.nonnegative.to_string());
        kv("irreducible", self.irreducible.to_string());
        kv("period", self.period.map_or_else(|| "undefined".into(), |h| h.to_string()));
        kv("primitive", self.primitive.to_string());
        kv("weakly_positive", self.weakly_positive.to_string());
        kv("positive", self.positive.to_string());
        kv("shift", self.rho.to_string());
        match &self.rate {
            Some(r) => {
                kv("beta", r.beta.to_string());
                kv("mu_bar", r.mu_bar.to_string());
                kv("alpha", r.alpha.to_string());
            }
            None => {
                kv("beta", "undefined".into());
                kv("mu_bar", "undefined".into());
                kv("alpha", "undefined".into());
            }
        }
        out
    }
}

fn check_square(a: &Matrix) -> Result<usize> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    Ok(a.rows())
}

/// Classifies `A_s` and computes the rate constants for shift `rho`.
pub fn classify(a: &Matrix, rho: f64) -> Result<StructureReport> {
    let n = check_square(a)?;
    let entries = a.as_slice();
    let nonnegative = entries.iter().all(|&v| v >= 0.0);
    let positive = entries.iter().all(|&v| v > 0.0);
    let weakly_positive = nonnegative && (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] > 0.0));

    let adj = pattern_adjacency(a);
    let irreducible = if n == 1 { a[(0, 0)] > 0.0 } else { strongly_connected(&adj) };
    let period = if irreducible { Some(period_of(&adj)) } else { None };
    let primitive = nonnegative && irreducible && period == Some(1);

    let rate = weakly_positive.then(|| rate_constants(a, rho));

    Ok(StructureReport {
        n,
        nonnegative,
        irreducible,
        period,
        primitive,
        weakly_positive,
        positive,
        rho,
        rate,
    })
}

/// `β = min(min_{i≠j} a_ij, min_i a_ii + ρ)`, `μ̄ = ρ + max_i Σ_j a_ij`.
pub fn rate_constants(a: &Matrix, rho: f64) -> RateConstants {
    let n = a.rows();
    let mut off = f64::INFINITY;
    let mut diag = f64::INFINITY;
    let mut max_row = f64::NEG_INFINITY;
    for i in 0..n {
        let row = a.row(i);
        for (j, &v) in row.iter().enumerate() {
            if i == j {
                diag = diag.min(v);
            } else {
                off = off.min(v);
            }
        }
        max_row = max_row.max(row.iter().sum());
    }
    let beta = off.min(diag + rho);
    let mu_bar = rho + max_row;
    RateConstants { beta, mu_bar, alpha: 1.0 - beta / mu_bar }
}

fn pattern_adjacency(a: &Matrix) -> Vec<Vec<usize>> {
    (0..a.rows())
        .map(|i| a.row(i).iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(j, _)| j).collect())
        .collect()
}

fn bfs_levels(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; adj.len()];
    level[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let lu = level[u].expect("queued nodes are labelled");
        for &v in &adj[u] {
            if level[v].is_none() {
                level[v] = Some(lu + 1);
                queue.push_back(v);
            }
        }
    }
    level
}

fn transpose_adjacency(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut t = vec![Vec::new(); adj.len()];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            t[v].push(u);
        }
    }
    t
}

/// Every node reachable from node 0 and reaching node 0.
fn strongly_connected(adj: &[Vec<usize>]) -> bool {
    bfs_levels(adj, 0).iter().all(Option::is_some)
        && bfs_levels(&transpose_adjacency(adj), 0).iter().all(Option::is_some)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// gcd of `ℓ(u) + 1 − ℓ(v)` over all edges, with `ℓ` the BFS depth from node 0.
/// Assumes strong connectivity.
fn period_of(adj: &[Vec<usize>]) -> usize {
    let level = bfs_levels(adj, 0);
    let mut h = 0;
    for (u, outs) in adj.iter().enumerate() {
        let lu = level[u].expect("strongly connected");
        for &v in outs {
            let lv = level[v].expect("strongly connected");
            // BFS guarantees lv ≤ lu + 1.
            h = gcd(h, lu + 1 - lv);
        }
    }
    h
}

/// Boolean-pattern primitivity test: is `A^((n−1)²+1)` entrywise positive?
///
/// Independent of [`classify`]; rows are held as 64-bit masks.
pub fn wielandt_check(a: &Matrix) -> Result<bool> {
    let n = check_square(a)?;
    if n > WIELANDT_MAX_N {
        return Err(Error::TooLarge { n, limit: WIELANDT_MAX_N });
    }
    let base: Vec<u64> = (0..n)
        .map(|i| (0..n).filter(|&j| a[(i, j)] > 0.0).fold(0u64, |m, j| m | (1 << j)))
        .collect();

    let mul = |x: &[u64], y: &[u64]| -> Vec<u64> {
        x.iter()
            .map(|&row| (0..n).filter(|&k| row & (1 << k) != 0).fold(0u64, |acc, k| acc | y[k]))
            .collect()
    };

    let mut exp = (n - 1) * (n - 1) + 1;
    let mut result: Option<Vec<u64>> = None;
    let mut power = base;
    while exp > 0 {
        if exp & 1 == 1 {
            result = Some(match result {
                Some(r) => mul(&r, &power),
                None => power.clone(),
            });
        }
        exp >>= 1;
        if exp > 0 {
            power = mul(&power, &power);
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(result.expect("exponent ≥ 1").iter().all(|&row| row == full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, ExampleId, ExampleSpec};
    use proptest::prelude::*;

    fn mat(rows: &[Vec<f64>]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn swap_matrix_has_period_two() {
        let r = classify(&mat(&[vec![0.0, 1.0], vec![1.0, 0.0]]), 1.0).unwrap();
        assert!(r.irreducible);
        assert_eq!(r.period, Some(2));
        assert!(!r.primitive);
        assert!(r.weakly_positive);
        assert!(!r.positive);
    }

    #[test]
    fn upper_triangular_is_reducible() {
        let r = classify(&mat(&[vec![1.0, 1.0], vec![0.0, 1.0]]), 1.0).unwrap();
        assert!(r.nonnegative);
        assert!(!r.irreducible);
        assert_eq!(r.period, None);
        assert!(!r.primitive);
    }

    #[test]
    fn ex52_is_primitive_weakly_positive() {
        let a = generate(&ExampleSpec::new(ExampleId::Ex52, 10)).unwrap();
        let r = classify(a.standard(), 1.0).unwrap();
        assert!(r.primitive && r.weakly_positive && !r.positive);
        let rate = r.rate.unwrap();
        // min off-diagonal 1+2 = 3, min diagonal + ρ = 1; max row sum = 8·10 + 55.
        assert_eq!(rate.beta, 1.0);
        assert_eq!(rate.mu_bar, 136.0);
        assert!((rate.alpha - (1.0 - 1.0 / 136.0)).abs() < 1e-15);
    }

    #[test]
    fn one_by_one() {
        assert!(classify(&mat(&[vec![2.0]]), 1.0).unwrap().primitive);
        let z = classify(&mat(&[vec![0.0]]), 1.0).unwrap();
        assert!(!z.irreducible && !z.primitive);
        assert!(wielandt_check(&mat(&[vec![2.0]])).unwrap());
        assert!(!wielandt_check(&mat(&[vec![0.0]])).unwrap());
    }

    #[test]
    fn negative_entries_flagged() {
        let r = classify(&mat(&[vec![1.0, -1.0], vec![1.0, 1.0]]), 1.0).unwrap();
        assert!(!r.nonnegative && !r.is_admissible() && !r.primitive && !r.weakly_positive);
    }

    #[test]
    fn not_square_rejected() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(classify(&a, 1.0), Err(Error::NotSquare { .. })));
        assert!(matches!(wielandt_check(&a), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn wielandt_examples() {
        assert!(!wielandt_check(&mat(&[vec![0.0, 1.0], vec![1.0, 0.0]])).unwrap());
        assert!(wielandt_check(&mat(&[vec![1.0, 1.0], vec![1.0, 0.0]])).unwrap());
        assert!(!wielandt_check(&mat(&[vec![1.0, 1.0], vec![0.0, 1.0]])).unwrap());
        assert!(matches!(
            wielandt_check(&Matrix::identity(65)),
            Err(Error::TooLarge { n: 65, limit: 64 })
        ));
    }

    #[test]
    fn wielandt_pattern_oracle_for_two_by_two() {
        // A² for [[1,1],[1,0]] by hand: [[2,1],[1,1]], all positive.
        let a = mat(&[vec![1.0, 1.0], vec![1.0, 0.0]]);
        let sq = a.matmul(&a);
        assert!(sq.as_slice().iter().all(|&v| v > 0.0));
    }

    #[test]
    fn wielandt_extremal_matrix() {
        // Wielandt's matrix attains the exponent bound (n−1)²+1 exactly.
        let n = 6;
        let mut a = Matrix::zeros(n, n);
        for i in 0..n - 1 {
            a[(i, i + 1)] = 1.0;
        }
        a[(n - 1, 0)] = 1.0;
        a[(n - 1, 1)] = 1.0;
        assert!(wielandt_check(&a).unwrap());
        assert!(classify(&a, 1.0).unwrap().primitive);
    }

    #[test]
    fn circulant_periods() {
        // Two directed cycles of lengths p and q sharing node 0: period gcd(p, q).
        for (p, q) in [(2usize, 4usize), (3, 6), (4, 6), (3, 5), (6, 9)] {
            let n = 1 + (p - 1) + (q - 1);
            let mut a = Matrix::zeros(n, n);
            let mut prev = 0;
            for k in 1..p {
                a[(prev, k)] = 1.0;
                prev = k;
            }
            a[(prev, 0)] = 1.0;
            prev = 0;
            for k in 0..q - 1 {
                let node = p + k;
                a[(prev, node)] = 1.0;
                prev = node;
            }
            a[(prev, 0)] = 1.0;
            let r = classify(&a, 1.0).unwrap();
            assert!(r.irreducible);
            let h = r.period.unwrap();
            assert_eq!(h, gcd(p, q), "cycles {p},{q}");
            assert_eq!(p % h, 0);
            assert_eq!(q % h, 0);
        }
    }

    fn irreducible_pattern() -> impl Strategy<Value = Matrix> {
        (2usize..9).prop_flat_map(|n| {
            (Just(n), proptest::collection::vec(prop_oneof![3 => Just(0.0), 1 => 0.1..2.0f64], n * n), Just(()))
        })
        .prop_map(|(n, vals, ())| {
            let mut a = Matrix::from_row_major(n, n, vals).unwrap();
            // A Hamiltonian cycle guarantees strong connectivity.
            for i in 0..n {
                if a[(i, (i + 1) % n)] == 0.0 {
                    a[(i, (i + 1) % n)] = 1.0;
                }
            }
            a
        })
    }

    fn nonnegative_pattern() -> impl Strategy<Value = Matrix> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::vec(prop_oneof![2 => Just(0.0), 1 => 0.5..1.5f64], n * n)
                .prop_map(move |v| Matrix::from_row_major(n, n, v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn shift_makes_irreducible_primitive(a in irreducible_pattern(), rho in 0.01..3.0f64) {
            prop_assert!(classify(&a, rho).unwrap().irreducible);
            let r = classify(&a.shifted(rho), rho).unwrap();
            prop_assert!(r.primitive);
        }

        #[test]
        fn classify_agrees_with_wielandt(a in nonnegative_pattern()) {
            prop_assert_eq!(classify(&a, 1.0).unwrap().primitive, wielandt_check(&a).unwrap());
        }

        #[test]
        fn report_invariants(a in nonnegative_pattern(), rho in 0.01..3.0f64) {
            let r = classify(&a, rho).unwrap();
            if r.positive { prop_assert!(r.weakly_positive); }
            if r.weakly_positive {
                prop_assert!(classify(&a.shifted(rho), rho).unwrap().positive);
                let rate = r.rate.unwrap();
                prop_assert!(rate.beta > 0.0 && rate.beta <= rate.mu_bar);
                prop_assert!((0.0..1.0).contains(&rate.alpha));
            }
            if r.irreducible {
                prop_assert_eq!(r.primitive, r.period == Some(1));
            }
        }
    }
}
