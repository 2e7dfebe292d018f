//! One-sided Jacobi SVD with QR preconditioning.
//!
//! The input is first reduced by a column-pivoted Householder QR, `A P = Q R`,
//! and Hestenes' one-sided Jacobi iteration is run on `Rᵀ`. The pivoted
//! preconditioning makes the Jacobi step converge in a handful of sweeps and
//! keeps high relative accuracy on the small singular values of graded
//! matrices, which is what the Cartan projection needs.

use super::matrix::Matrix;

const MAX_SWEEPS: usize = 80;

/// `a = u · diag(sigma) · vᵀ` with `sigma` non-increasing.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows x k` with orthonormal columns, `k = min(rows, cols)`.
    pub u: Matrix,
    pub sigma: Vec<f64>,
    /// `cols x k` with orthonormal columns.
    pub v: Matrix,
}

impl Svd {
    pub fn recompose(&self) -> Matrix {
        let mut us = self.u.clone();
        for j in 0..self.sigma.len() {
            for i in 0..us.rows() {
                us[(i, j)] *= self.sigma[j];
            }
        }
        &us * &self.v.transpose()
    }
}

/// Column-pivoted Householder QR of a tall matrix. Returns the thin `Q`
/// (`m x n`, only when requested), the `n x n` triangular factor and the
/// column permutation (`(A P)[:, k] = A[:, perm[k]]`).
fn pivoted_qr(a: &Matrix, want_q: bool) -> (Option<Matrix>, Matrix, Vec<usize>) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors: Vec<(usize, Vec<f64>, f64)> = Vec::new();
    for k in 0..n {
        // Pivot: largest remaining column norm.
        let norms: Vec<f64> =
            (k..n).map(|j| (k..m).map(|i| r[(i, j)] * r[(i, j)]).sum::<f64>()).collect();
        let (best, _) = norms
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let p = k + best;
        if p != k {
            for i in 0..m {
                let t = r[(i, k)];
                r[(i, k)] = r[(i, p)];
                r[(i, p)] = t;
            }
            perm.swap(k, p);
        }
        if k + 1 >= m {
            continue;
        }
        let norm = (k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..n {
            let dot: f64 = (k..m).map(|i| v[i - k] * r[(i, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                r[(i, j)] -= f * v[i - k];
            }
        }
        for i in k + 1..m {
            r[(i, k)] = 0.0;
        }
        if want_q {
            reflectors.push((k, v, vnorm2));
        }
    }
    let mut tri = Matrix::zeros(n, n);
    for i in 0..n.min(m) {
        for j in i..n {
            tri[(i, j)] = r[(i, j)];
        }
    }
    let q = want_q.then(|| {
        // Apply the reflectors in reverse to the first n columns of I.
        let mut q = Matrix::zeros(m, n);
        for j in 0..n.min(m) {
            q[(j, j)] = 1.0;
        }
        for (k, v, vnorm2) in reflectors.iter().rev() {
            for j in 0..n {
                let dot: f64 = (*k..m).map(|i| v[i - k] * q[(i, j)]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in *k..m {
                    q[(i, j)] -= f * v[i - k];
                }
            }
        }
        q
    });
    (q, tri, perm)
}

/// Hestenes iteration on the columns of `w`; rotations are mirrored into
/// `v` when present.
fn jacobi_columns(w: &mut Matrix, mut v: Option<&mut Matrix>) {
    let (m, n) = (w.rows(), w.cols());
    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..m {
                    let (a, b) = (w[(i, p)], w[(i, q)]);
                    alpha += a * a;
                    beta += b * b;
                    gamma += a * b;
                }
                if gamma == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (a, b) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * a - s * b;
                    w[(i, q)] = s * a + c * b;
                }
                if let Some(v) = v.as_deref_mut() {
                    for i in 0..v.rows() {
                        let (a, b) = (v[(i, p)], v[(i, q)]);
                        v[(i, p)] = c * a - s * b;
                        v[(i, q)] = s * a + c * b;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

fn column_norms(w: &Matrix) -> Vec<f64> {
    (0..w.cols())
        .map(|j| (0..w.rows()).map(|i| w[(i, j)] * w[(i, j)]).sum::<f64>().sqrt())
        .collect()
}

/// Singular values in non-increasing order.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let a = if a.rows() < a.cols() { a.transpose() } else { a.clone() };
    let (_, r, _) = pivoted_qr(&a, false);
    let mut w = r.transpose();
    jacobi_columns(&mut w, None);
    let mut s = column_norms(&w);
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Thin singular value decomposition.
pub fn svd(a: &Matrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.transpose());
        return Svd { u: t.v, sigma: t.sigma, v: t.u };
    }
    let (m, n) = (a.rows(), a.cols());
    let (q, r, perm) = pivoted_qr(a, true);
    let q = q.expect("requested Q");
    // Rᵀ V = W, so R = V Σ U_xᵀ and A = (Q V) Σ (P U_x)ᵀ.
    let mut w = r.transpose();
    let mut v = Matrix::identity(n);
    jacobi_columns(&mut w, Some(&mut v));
    let sigma = column_norms(&w);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let smax = sigma.iter().cloned().fold(0.0, f64::max);

    let mut ux = Matrix::zeros(n, n);
    let mut vs = Matrix::zeros(n, n);
    let mut sorted = Vec::with_capacity(n);
    let mut deficient = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        sorted.push(sigma[j]);
        for i in 0..n {
            vs[(i, k)] = v[(i, j)];
        }
        if sigma[j] > smax * f64::EPSILON * 1e-3 && sigma[j] > 0.0 {
            for i in 0..n {
                ux[(i, k)] = w[(i, j)] / sigma[j];
            }
        } else {
            deficient.push(k);
        }
    }
    complete_orthonormal(&mut ux, &deficient);

    let u = &q * &vs;
    let mut right = Matrix::zeros(n, n);
    for k in 0..n {
        for j in 0..n {
            right[(perm[k], j)] = ux[(k, j)];
        }
    }
    debug_assert_eq!(u.rows(), m);
    Svd { u, sigma: sorted, v: right }
}

/// Fills the listed columns so that all columns are orthonormal.
fn complete_orthonormal(m: &mut Matrix, missing: &[usize]) {
    let n = m.rows();
    for &k in missing {
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = 0.0;
        for e in 0..n {
            let mut x = vec![0.0; n];
            x[e] = 1.0;
            for j in 0..m.cols() {
                if j == k || (missing.contains(&j) && j > k) {
                    continue;
                }
                let dot: f64 = (0..n).map(|i| m[(i, j)] * x[i]).sum();
                for i in 0..n {
                    x[i] -= dot * m[(i, j)];
                }
            }
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nrm > best_norm {
                best_norm = nrm;
                best = Some(x);
            }
        }
        if let Some(x) = best {
            for i in 0..n {
                m[(i, k)] = x[i] / best_norm;
            }
        }
    }
}
