use super::cartan::CartanVector;
use super::matrix::Matrix;
use super::svd::{singular_values, svd, Svd};
use crate::error::{Error, Result};

/// A group element carried as `exp(scale) · matrix` together with its
/// inverse in the same form.
///
/// Both factors are kept at unit Frobenius norm, so long words never
/// overflow. Carrying the inverse lets the small singular values be read
/// off as reciprocals of the inverse's large ones instead of being lost to
/// cancellation in the forward product.
#[derive(Clone, Debug)]
pub struct ScaledElement {
    fwd: Matrix,
    fwd_log: f64,
    inv: Matrix,
    inv_log: f64,
}

impl ScaledElement {
    pub fn identity(d: usize) -> Self {
        let (fwd, fwd_log) = Matrix::identity(d).normalized();
        Self { inv: fwd.clone(), inv_log: fwd_log, fwd, fwd_log }
    }

    pub fn from_matrix(g: &Matrix) -> Result<Self> {
        g.ensure_square()?;
        if !g.is_finite() {
            return Err(Error::NonFinite);
        }
        let inv = g.inverse()?;
        Ok(Self::from_pair(g, &inv))
    }

    /// Trusts the caller that `inv` is the inverse of `g`.
    pub fn from_pair(g: &Matrix, inv: &Matrix) -> Self {
        let (fwd, fwd_log) = g.normalized();
        let (inv, inv_log) = inv.normalized();
        Self { fwd, fwd_log, inv, inv_log }
    }

    pub fn dim(&self) -> usize {
        self.fwd.dim()
    }

    /// Unit-norm representative of the element (projective data).
    pub fn direction(&self) -> &Matrix {
        &self.fwd
    }

    /// Unit-norm representative of the inverse.
    pub fn inverse_direction(&self) -> &Matrix {
        &self.inv
    }

    pub fn log_scale(&self) -> f64 {
        self.fwd_log
    }

    /// The actual matrix. Overflows for very long words.
    pub fn to_matrix(&self) -> Matrix {
        self.fwd.scaled(self.fwd_log.exp())
    }

    pub fn inverse(&self) -> Self {
        Self { fwd: self.inv.clone(), fwd_log: self.inv_log, inv: self.fwd.clone(), inv_log: self.fwd_log }
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &ScaledElement) -> Self {
        let (fwd, a) = (&self.fwd * &rhs.fwd).normalized();
        let (inv, b) = (&rhs.inv * &self.inv).normalized();
        Self { fwd, fwd_log: self.fwd_log + rhs.fwd_log + a, inv, inv_log: self.inv_log + rhs.inv_log + b }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::identity(self.dim());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// For each index, whether the forward factor resolves singular value
    /// `k` more accurately than the inverse does. The forward estimate of
    /// `σ_k` has relative error about `ε σ_1/σ_k` and the inverse one about
    /// `ε σ_k/σ_d`; each error is judged with that route's own estimate, so
    /// a value lost below a route's noise floor shows up as a large error.
    fn forward_resolves(logs_fwd: &[f64], logs_inv: &[f64]) -> Vec<bool> {
        let d = logs_fwd.len();
        let top = logs_fwd[0];
        let bottom = logs_inv[d - 1];
        (0..d)
            .map(|k| {
                let err_f = if logs_fwd[k].is_finite() { top - logs_fwd[k] } else { f64::INFINITY };
                let err_i = if logs_inv[k].is_finite() { logs_inv[k] - bottom } else { f64::INFINITY };
                err_f <= err_i
            })
            .collect()
    }

    /// Log singular values as read from the forward factor and from the
    /// inverse (index `k` of both refers to `σ_k` of the element).
    fn log_singular_pairs(&self, s_fwd: &[f64], s_inv: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let d = s_fwd.len();
        let lf: Vec<f64> = s_fwd.iter().map(|s| s.ln() + self.fwd_log).collect();
        let li: Vec<f64> = (0..d).map(|k| -(s_inv[d - 1 - k].ln() + self.inv_log)).collect();
        (lf, li)
    }

    /// Cartan projection, combining both factors index by index.
    pub fn cartan(&self) -> CartanVector {
        let s_fwd = singular_values(&self.fwd);
        let s_inv = singular_values(&self.inv);
        let (lf, li) = self.log_singular_pairs(&s_fwd, &s_inv);
        let use_fwd = Self::forward_resolves(&lf, &li);
        let values = (0..lf.len()).map(|k| if use_fwd[k] { lf[k] } else { li[k] }).collect();
        CartanVector::from_unsorted(values)
    }

    /// Singular frames of both factors plus the split index `h`: columns
    /// `0..h` of the forward left frame are trusted, the rest should be
    /// taken from the inverse's right frame.
    pub fn split_frames(&self) -> (Svd, Svd, usize) {
        let f = svd(&self.fwd);
        let i = svd(&self.inv);
        let (lf, li) = self.log_singular_pairs(&f.sigma, &i.sigma);
        let use_fwd = Self::forward_resolves(&lf, &li);
        let h = use_fwd.iter().take_while(|&&b| b).count().max(1);
        (f, i, h)
    }
}
