//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by the implicit-shift QL iteration, with optional accumulation
//! of the orthogonal transformation. Hermitian matrices are handled through
//! their real-symmetric embedding, which carries each eigenvalue twice.
//!
//! The accuracy contract is the usual backward-stable one: residuals
//! `||H v - lambda v||` of order `n * eps * ||H||`, far inside the 1e-9
//! relative bound asserted by the callers.

use crate::matrix::{HermMatrix, SymMatrix};

/// QL sweeps per eigenvalue before giving up. The classical bound is ~30;
/// exceeding it on finite input indicates a logic error, not bad data.
const MAX_SWEEPS: u32 = 64;

/// Householder reduction of the symmetric matrix stored row-major in `a`.
///
/// On return `d` holds the tridiagonal diagonal and `e[1..n]` the
/// subdiagonal (`e[0] = 0`). With `accumulate`, `a` is overwritten by the
/// orthogonal matrix Q of the reduction; otherwise its contents are spent.
fn householder_tridiag(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0_f64;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0_f64;
                for j in 0..=l {
                    if accumulate {
                        a[j * n + i] = a[i * n + j] / h;
                    }
                    let mut g = 0.0_f64;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    e[j] -= hh * f;
                    let g = e[j];
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;

    if accumulate {
        for i in 0..n {
            if i > 0 && d[i] != 0.0 {
                for j in 0..i {
                    let mut g = 0.0_f64;
                    for k in 0..i {
                        g += a[i * n + k] * a[k * n + j];
                    }
                    for k in 0..i {
                        a[k * n + j] -= g * a[k * n + i];
                    }
                }
            }
            d[i] = a[i * n + i];
            a[i * n + i] = 1.0;
            for j in 0..i {
                a[j * n + i] = 0.0;
                a[i * n + j] = 0.0;
            }
        }
    } else {
        for i in 0..n {
            d[i] = a[i * n + i];
        }
    }
}

/// Implicit-shift QL iteration on a tridiagonal matrix `(d, e)`; `e` uses
/// the [`householder_tridiag`] convention. If `z` is given it must hold the
/// accumulated reduction matrix and is rotated into the eigenvectors
/// (column `j` pairs with `d[j]`).
fn tridiag_ql(d: &mut [f64], e: &mut [f64], n: usize, mut z: Option<&mut [f64]>) {
    if n <= 1 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut sweeps = 0_u32;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            assert!(
                sweeps <= MAX_SWEEPS,
                "QL iteration failed to converge after {MAX_SWEEPS} sweeps"
            );
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(if g == 0.0 { 1.0 } else { g }));
            let mut s = 1.0_f64;
            let mut c = 1.0_f64;
            let mut p = 0.0_f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// All eigenvalues of a real symmetric matrix, ascending.
pub(crate) fn symmetric_eigenvalues(m: &SymMatrix) -> Vec<f64> {
    let n = m.n();
    if n == 0 {
        return Vec::new();
    }
    let mut a = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiag(&mut a, n, &mut d, &mut e, false);
    tridiag_ql(&mut d, &mut e, n, None);
    d.sort_unstable_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    d
}

/// Eigenvalues (ascending) and eigenvectors of a real symmetric matrix.
/// Vectors are returned row-major with column `j` the unit eigenvector of
/// `values[j]`.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn symmetric_eigen(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiag(&mut a, n, &mut d, &mut e, true);
    tridiag_ql(&mut d, &mut e, n, Some(&mut a));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_j, &old_j) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new_j] = a[k * n + old_j];
        }
    }
    (values, vectors)
}

/// All eigenvalues of a complex Hermitian matrix, ascending, via the
/// real-symmetric embedding (every second value of the doubled spectrum).
pub(crate) fn hermitian_eigenvalues(m: &HermMatrix) -> Vec<f64> {
    let doubled = symmetric_eigenvalues(&m.real_embedding());
    doubled.into_iter().step_by(2).collect()
}
