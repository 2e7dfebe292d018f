//! Seeded pseudo-random matrices and group elements.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{singular_values, Matrix};

/// Default seed for reproducible sampling.
pub const DEFAULT_SEED: u64 = 0x5EED;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    Matrix::from_row_major(rows, cols, data).expect("shape matches data")
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with a
/// nonnegative triangular diagonal).
pub fn random_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Matrix {
    gaussian_matrix(d, d, rng).qr().0
}

/// Gaussian matrix rescaled to determinant ±1 (sign fixed in odd
/// dimension), rejected until its condition number is below `max_condition`.
pub fn random_unimodular<R: Rng + ?Sized>(d: usize, max_condition: f64, rng: &mut R) -> Matrix {
    loop {
        let mut g = gaussian_matrix(d, d, rng);
        let det = match g.det() {
            Ok(x) if x != 0.0 && x.is_finite() => x,
            _ => continue,
        };
        if det < 0.0 {
            if d % 2 == 0 {
                // Swap two columns to flip the sign.
                let (c0, c1) = (g.column(0), g.column(1));
                g.set_column(0, &c1);
                g.set_column(1, &c0);
            } else {
                g = g.scaled(-1.0);
            }
        }
        let g = g.scaled(det.abs().powf(-1.0 / d as f64));
        let s = singular_values(&g);
        if s[0] / s[d - 1] < max_condition {
            return g;
        }
    }
}

/// `k1 · diag(exp(a)) · k2` with Haar `k1, k2` and a trace-free `a` whose
/// spread is uniform in `[0, max_log_condition)`.
pub fn random_with_cartan<R: Rng + ?Sized>(d: usize, max_log_condition: f64, rng: &mut R) -> Matrix {
    let mut a: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    let (lo, hi) = a.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let spread = rng.random::<f64>() * max_log_condition;
    let width = if hi > lo { hi - lo } else { 1.0 };
    for x in a.iter_mut() {
        *x = (*x - lo) / width * spread;
    }
    let mean = a.iter().sum::<f64>() / d as f64;
    let exp: Vec<f64> = a.iter().map(|x| (x - mean).exp()).collect();
    let k1 = random_orthogonal(d, rng);
    let k2 = random_orthogonal(d, rng);
    &(&k1 * &Matrix::diag(&exp)) * &k2
}
