use dual_perron::generators::SplitMix64;
use dual_perron::oracle::{lambda_d_oracle, spectrum};
use dual_perron::solver::{minimax_ratios, row_sum_bounds};
use dual_perron::{generate, solve, DualMatrix, ExampleId, ExampleSpec, Flag, Matrix, SolverConfig};

fn assert_matches_oracle(a: &DualMatrix, cfg: &SolverConfig) {
    let r = solve(a, cfg).unwrap();
    let l = r.lambda.expect("converged");
    let o = spectrum(a.standard()).unwrap();
    assert!((l.standard - o.perron_value).abs() <= 1e-8 * o.perron_value, "{l} vs {}", o.perron_value);
    let ld = lambda_d_oracle(a, &o);
    assert!((l.dual - ld).abs() <= 1e-6 * (1.0 + ld.abs()), "{l} vs {ld}");
}

#[test]
fn table_families_match_dense_eigensolver() {
    for id in [ExampleId::Ex51, ExampleId::Ex52, ExampleId::Ex53] {
        for n in [2, 5, 10, 40, 100] {
            assert_matches_oracle(&generate(&ExampleSpec::new(id, n)).unwrap(), &SolverConfig::default());
        }
    }
}

#[test]
fn ex52_at_100_is_order_n_squared() {
    // Dense check of the (5.2, 100) cell: 1.0737e4, one decade below the
    // printed table value.
    let a = generate(&ExampleSpec::new(ExampleId::Ex52, 100)).unwrap();
    let o = spectrum(a.standard()).unwrap();
    assert!((o.perron_value - 10737.3689).abs() < 1e-3);
    let l = solve(&a, &SolverConfig::default()).unwrap().lambda.unwrap();
    assert!((l.standard - o.perron_value).abs() < 1e-6 * o.perron_value);
}

#[test]
fn ex51_closed_form() {
    for n in [3usize, 10, 50] {
        let a = generate(&ExampleSpec::new(ExampleId::Ex51, n)).unwrap();
        let l = solve(&a, &SolverConfig::default()).unwrap().lambda.unwrap();
        let m = (n - 1) as f64;
        assert!((l.standard - m.sqrt()).abs() < 1e-7);
        assert!((l.dual - (1.0 + (m.sqrt() + m - 1.0) / (2.0 * m))).abs() < 1e-6);
    }
}

#[test]
fn random_positive_and_sparse_irreducible_inputs() {
    let mut rng = SplitMix64::new(77);
    for _ in 0..30 {
        let n = 2 + (rng.next_u64() % 12) as usize;
        // A cycle keeps the pattern irreducible; extra edges are random.
        let s = Matrix::from_fn(n, n, |i, j| {
            let extra = rng.next_f64() < 0.3;
            if j == (i + 1) % n || extra { 0.1 + rng.next_f64() } else { 0.0 }
        });
        let d = Matrix::from_fn(n, n, |_, _| rng.next_normal());
        let a = DualMatrix::new(s, d).unwrap();
        let rho = 0.25 + 2.0 * rng.next_f64();
        assert_matches_oracle(&a, &SolverConfig { rho, delta1: 1e-12, k_max: 20000, ..SolverConfig::default() });
    }
}

#[test]
fn eigenpair_bracketed_by_its_own_ratios() {
    let a = generate(&ExampleSpec::ex54(9, 11)).unwrap();
    let r = solve(&a, &SolverConfig::default()).unwrap();
    assert_eq!(r.flag, Flag::ConvergedFull);
    let x = r.x.unwrap();
    let (lo, hi) = minimax_ratios(&a, &x).unwrap();
    let l = r.lambda.unwrap();
    assert!((hi - lo).frn_norm() <= 1e-7 * a.frn_norm());
    assert!((l - lo).frn_norm() <= 1e-7 * a.frn_norm());
    let (rlo, rhi) = row_sum_bounds(&a);
    assert!(rlo <= l && l <= rhi);
}

#[test]
#[ignore = "large sizes; run with --ignored --release"]
fn table_thousand_cells() {
    let n = 1000;
    let a = generate(&ExampleSpec::new(ExampleId::Ex51, n)).unwrap();
    let l = solve(&a, &SolverConfig::default()).unwrap().lambda.unwrap();
    let m = (n - 1) as f64;
    assert!((l.standard - m.sqrt()).abs() < 1e-6);
    assert!((l.dual - (1.0 + (m.sqrt() + m - 1.0) / (2.0 * m))).abs() < 1e-4);

    for id in [ExampleId::Ex52, ExampleId::Ex53] {
        let a = generate(&ExampleSpec::new(id, n)).unwrap();
        let r = solve(&a, &SolverConfig::default()).unwrap();
        assert!(r.converged());
        assert!(r.residual.unwrap() <= 1e-7 * a.frn_norm());
    }
}

#[test]
#[ignore = "n = 10000 needs about 1.6 GB; run with --ignored --release"]
fn table_ten_thousand_ex51() {
    let n = 10000;
    let a = generate(&ExampleSpec::new(ExampleId::Ex51, n)).unwrap();
    let l = solve(&a, &SolverConfig::default()).unwrap().lambda.unwrap();
    assert!((l.standard - 9999f64.sqrt()).abs() < 0.01);
    assert!((l.dual - 1.50).abs() < 0.02);
}

#[test]
fn default_config_meets_oracle_bounds_up_to_fifty() {
    let mut rng = SplitMix64::new(50);
    for _ in 0..40 {
        let n = 2 + (rng.next_u64() % 49) as usize;
        let a = generate(&ExampleSpec::ex54(n, rng.next_u64())).unwrap();
        let r = solve(&a, &SolverConfig::default()).unwrap();
        let l = r.lambda.unwrap();
        let o = spectrum(a.standard()).unwrap();
        assert!((l.standard - o.perron_value).abs() <= 1e-8 * o.perron_value, "n={n}");
        let ld = lambda_d_oracle(&a, &o);
        assert!((l.dual - ld).abs() <= 1e-6 * (1.0 + ld.abs()), "n={n}");
    }
}
