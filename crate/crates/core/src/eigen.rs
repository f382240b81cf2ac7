//! Dense nonsymmetric eigenvalues: Householder reduction to upper Hessenberg
//! form followed by the Francis double-shift QR iteration (EISPACK `hqr`).
//!
//! Only eigenvalues are produced; eigenvectors for selected real eigenvalues
//! come from inverse iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::real::{norm2, Lu, Matrix};


/// All eigenvalues of a square real matrix, in no particular order.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let mut h = a.clone();
    hessenberg(&mut h);
    hqr(&h, n)
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut Matrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        // The reflector is invariant under scaling of v, so work with the
        // column scaled to unit max to avoid underflow in the squared norm.
        let scale = (k + 1..n).map(|i| a[(i, k)].abs()).fold(0.0, f64::max);
        if scale == 0.0 {
            continue;
        }
        for i in k + 1..n {
            v[i] = a[(i, k)] / scale;
        }
        let alpha_norm = (k + 1..n).map(|i| v[i] * v[i]).sum::<f64>().sqrt();
        let alpha = if v[k + 1] > 0.0 { -alpha_norm } else { alpha_norm };
        v[k + 1] -= alpha;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i] * v[i]).sum();
        let tau = 2.0 / vnorm2;
        // A ← (I − τvvᵀ) A
        for j in 0..n {
            let s: f64 = (k + 1..n).map(|i| v[i] * a[(i, j)]).sum();
            let s = s * tau;
            for i in k + 1..n {
                a[(i, j)] -= s * v[i];
            }
        }
        // A ← A (I − τvvᵀ)
        for i in 0..n {
            let s: f64 = (k + 1..n).map(|j| a[(i, j)] * v[j]).sum();
            let s = s * tau;
            for j in k + 1..n {
                a[(i, j)] -= s * v[j];
            }
        }
        for i in k + 2..n {
            a[(i, k)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix. Internally 1-based to stay close
/// to the reference formulation.
#[allow(clippy::many_single_char_names)]
fn hqr(h: &Matrix, n: usize) -> Result<Vec<Complex64>> {
    let mut a = vec![vec![0.0f64; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = h[(i, j)];
        }
    }
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }

    let mut nn = n as isize;
    let mut t = 0.0;
    let (mut p, mut q, mut r);
    let (mut x, mut y, mut z, mut w);
    let max_sweeps = 30 * n.max(10);
    while nn >= 1 {
        let mut its = 0;
        let mut l: isize;
        loop {
            // Look for a single small subdiagonal element.
            l = nn;
            while l >= 2 {
                let lu = l as usize;
                let mut s = a[lu - 1][lu - 1].abs() + a[lu][lu].abs();
                if s == 0.0 {
                    s = anorm;
                }
                // Relative test, plus a norm-wise floor so blocks around zero
                // eigenvalues still deflate.
                if a[lu][lu - 1].abs() + s == s || a[lu][lu - 1].abs() <= f64::EPSILON * anorm {
                    a[lu][lu - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let nu = nn as usize;
            x = a[nu][nu];
            if l == nn {
                wr[nu] = x + t;
                wi[nu] = 0.0;
                nn -= 1;
                break;
            }
            y = a[nu - 1][nu - 1];
            w = a[nu][nu - 1] * a[nu - 1][nu];
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nu - 1] = x + z;
                    wr[nu] = x + z;
                    if z != 0.0 {
                        wr[nu] = x - w / z;
                    }
                    wi[nu - 1] = 0.0;
                    wi[nu] = 0.0;
                } else {
                    wr[nu - 1] = x + p;
                    wr[nu] = x + p;
                    wi[nu - 1] = -z;
                    wi[nu] = z;
                }
                nn -= 2;
                break;
            }
            if its == max_sweeps {
                return Err(Error::EigenNoConvergence);
            }
            if its % 10 == 0 && its > 0 {
                // Exceptional shift.
                t += x;
                for i in 1..=nu {
                    a[i][i] -= x;
                }
                // Alternate between the bottom and the top of the active block so
                // cyclic structures cannot lock the shifts into a loop.
                let top = l as usize;
                let s = if (its / 10) % 2 == 1 || top + 2 > nu {
                    a[nu][nu - 1].abs() + a[nu - 1][nu - 2].abs()
                } else {
                    a[top + 1][top].abs() + a[top + 2][top + 1].abs()
                };
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            let lu = l as usize;
            // Look for two consecutive small subdiagonal elements.
            let mut m = nu - 2;
            loop {
                z = a[m][m];
                r = x - z;
                let s = y - z;
                p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - r - s;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                if s != 0.0 {
                    p /= s;
                    q /= s;
                    r /= s;
                }
                if m == lu {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nu {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }
            // Double QR step on rows l..nn and columns m..nn.
            let mut k = m;
            while k < nu {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if k != nu - 1 {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if lu != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nu {
                        p = a[k][j] + q * a[k + 1][j];
                        if k != nu - 1 {
                            p += r * a[k + 2][j];
                            a[k + 2][j] -= p * z;
                        }
                        a[k + 1][j] -= p * y;
                        a[k][j] -= p * x;
                    }
                    let mmin = if nu < k + 3 { nu } else { k + 3 };
                    for i in lu..=mmin {
                        p = x * a[i][k] + y * a[i][k + 1];
                        if k != nu - 1 {
                            p += z * a[i][k + 2];
                            a[i][k + 2] -= p * r;
                        }
                        a[i][k + 1] -= p * q;
                        a[i][k] -= p;
                    }
                }
                k += 1;
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

/// Eigenvector of `a` for the real eigenvalue `mu`, by inverse iteration.
///
/// Returned with unit 2-norm and nonnegative component sum.
pub fn real_eigenvector(a: &Matrix, mu: f64) -> Vec<f64> {
    let n = a.rows();
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let lu = Lu::factor_regularized(&a.shifted(-mu), scale * 1e-14);
    let mut v = vec![1.0; n];
    // A slightly irregular start avoids being orthogonal to the target.
    for (i, vi) in v.iter_mut().enumerate() {
        *vi += 1e-3 * ((i * 7919) % 101) as f64 / 101.0;
    }
    for _ in 0..4 {
        let mut next = lu.solve(&v);
        let nrm = norm2(&next);
        if !(nrm.is_finite() && nrm > 0.0) {
            break;
        }
        next.iter_mut().for_each(|x| *x /= nrm);
        v = next;
    }
    let nrm = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nrm);
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_cyclic_pattern_converges() {
        // First column ones, last row ones, a_1n = 1: many zero eigenvalues and
        // underflowing Householder columns.
        for n in [40, 100] {
            let a = Matrix::from_fn(n, n, |i, j| {
                if (j == 0 && i > 0) || (i == n - 1 && j < n - 1) || (i == 0 && j == n - 1) { 1.0 } else { 0.0 }
            });
            let ev = eigenvalues(&a).unwrap();
            let trace: f64 = ev.iter().map(|e| e.re).sum();
            assert!(trace.abs() < 1e-6);
            assert!(ev.iter().all(|e| e.re.is_finite() && e.im.is_finite()));
        }
    }

    fn sorted_re(mut ev: Vec<Complex64>) -> Vec<Complex64> {
        ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        ev
    }

    fn char_poly_residual(a: &Matrix, mu: Complex64) -> f64 {
        // |det(A − μI)| relative to ‖A‖ⁿ via complex Gaussian elimination.
        let n = a.rows();
        let mut m: Vec<Vec<Complex64>> =
            (0..n).map(|i| (0..n).map(|j| Complex64::new(a[(i, j)], 0.0) - if i == j { mu } else { 0.0.into() }).collect()).collect();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm())).unwrap();
            if p != k {
                m.swap(p, k);
                det = -det;
            }
            let piv = m[k][k];
            det *= piv;
            if piv.norm() == 0.0 {
                return 0.0;
            }
            for i in k + 1..n {
                let f = m[i][k] / piv;
                for j in k..n {
                    let t = m[k][j];
                    m[i][j] -= f * t;
                }
            }
        }
        det.norm() / (1.0 + a.frobenius_norm()).powi(n as i32)
    }

    #[test]
    fn swap_matrix() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let ev = sorted_re(eigenvalues(&a).unwrap());
        assert!((ev[0].re + 1.0).abs() < 1e-15 && (ev[1].re - 1.0).abs() < 1e-15);
        assert!(ev.iter().all(|e| e.im == 0.0));
    }

    #[test]
    fn scalar() {
        let ev = eigenvalues(&Matrix::from_rows(&[vec![2.0]]).unwrap()).unwrap();
        assert_eq!(ev, vec![Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn rotation_gives_complex_pair() {
        let a = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let ev = eigenvalues(&a).unwrap();
        assert!(ev.iter().all(|e| e.re.abs() < 1e-15 && (e.im.abs() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn cyclic_permutation_roots_of_unity() {
        let n = 7;
        let a = Matrix::from_fn(n, n, |i, j| if j == (i + 1) % n { 1.0 } else { 0.0 });
        let ev = eigenvalues(&a).unwrap();
        for e in &ev {
            assert!((e.norm() - 1.0).abs() < 1e-12);
            assert!((e.powu(n as u32) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn random_matrices_satisfy_characteristic_polynomial() {
        let mut rng = crate::generators::SplitMix64::new(99);
        for n in [3usize, 5, 8, 13, 30] {
            let a = Matrix::from_fn(n, n, |_, _| rng.next_f64() - 0.5);
            let ev = eigenvalues(&a).unwrap();
            assert_eq!(ev.len(), n);
            let trace: f64 = (0..n).map(|i| a[(i, i)]).sum();
            let sum: Complex64 = ev.iter().sum();
            assert!((sum.re - trace).abs() < 1e-10 && sum.im.abs() < 1e-10);
            for e in &ev {
                assert!(char_poly_residual(&a, *e) < 1e-10, "n={n} e={e}");
            }
        }
    }

    #[test]
    fn inverse_iteration_recovers_vector() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let v = real_eigenvector(&a, 3.0);
        let s = 0.5f64.sqrt();
        assert!((v[0] - s).abs() < 1e-12 && (v[1] - s).abs() < 1e-12);
    }
}
