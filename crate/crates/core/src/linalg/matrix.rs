use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};

/// Dense real matrix stored row-major.
///
/// Most of the crate works with square `d x d` matrices; rectangular shapes
/// show up as column blocks of flag frames.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Square matrices are the group elements; the alias documents intent.
pub type SquareMatrix = Matrix;

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimMismatch { expected: c, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(Error::DimMismatch { expected: r, found: col.len() });
            }
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// Counter-clockwise rotation of the plane by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { rows: 2, cols: 2, data: vec![c, -s, s, c] }
    }

    /// Rotation by `theta` in the coordinate plane `(i, j)` of R^d.
    pub fn givens(d: usize, i: usize, j: usize, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let mut m = Self::identity(d);
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(i, j)] = -s;
        m[(j, i)] = s;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        self.rows
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[f64]) {
        for (i, &v) in values.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    /// The first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        let mut m = Matrix::zeros(self.rows, k);
        for i in 0..self.rows {
            m.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimMismatch { expected: self.rows, found: other.rows });
        }
        let c = self.cols + other.cols;
        let mut m = Matrix::zeros(self.rows, c);
        for i in 0..self.rows {
            m.data[i * c..i * c + self.cols].copy_from_slice(self.row(i));
            m.data[i * c + self.cols..(i + 1) * c].copy_from_slice(other.row(i));
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scaled(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest entrywise deviation of `selfᵀ self` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let g = &self.transpose() * self;
        g.max_abs_diff(&Matrix::identity(self.cols))
    }

    /// LU factorization with partial pivoting; returns the packed factors,
    /// the row permutation and the sign of that permutation.
    fn lu(&self) -> (Matrix, Vec<usize>, f64) {
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))
                .unwrap_or(k);
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[(k, k)];
            if pivot == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        (a, perm, sign)
    }

    pub fn det(&self) -> Result<f64> {
        let n = self.ensure_square()?;
        let (lu, _, sign) = self.lu();
        Ok((0..n).fold(sign, |acc, i| acc * lu[(i, i)]))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.ensure_square()?;
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let (lu, perm, _) = self.lu();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let smallest_pivot = (0..n).fold(f64::INFINITY, |m, i| m.min(lu[(i, i)].abs()));
        if smallest_pivot <= f64::EPSILON * scale * 1e-4 {
            return Err(Error::SingularInput { smallest: smallest_pivot });
        }
        let mut inv = Matrix::zeros(n, n);
        for col in 0..n {
            // Solve L U x = P e_col.
            let mut x: Vec<f64> = (0..n).map(|i| if perm[i] == col { 1.0 } else { 0.0 }).collect();
            for i in 0..n {
                for j in 0..i {
                    x[i] -= lu[(i, j)] * x[j];
                }
            }
            for i in (0..n).rev() {
                for j in i + 1..n {
                    x[i] -= lu[(i, j)] * x[j];
                }
                x[i] /= lu[(i, i)];
            }
            inv.set_column(col, &x);
        }
        Ok(inv)
    }

    /// Rescales to determinant one. Odd dimensions absorb a negative
    /// determinant by an overall sign flip; even dimensions cannot.
    pub fn make_unimodular(&self) -> Result<Matrix> {
        let n = self.ensure_square()?;
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let det = self.det()?;
        if det == 0.0 {
            return Err(Error::SingularInput { smallest: 0.0 });
        }
        if det < 0.0 && n % 2 == 0 {
            return Err(Error::NotUnimodular { det });
        }
        let s = det.signum() * det.abs().powf(-1.0 / n as f64);
        Ok(self.scaled(s))
    }

    pub fn is_unimodular(&self, det_tol: f64) -> Result<bool> {
        Ok((self.det()? - 1.0).abs() <= det_tol)
    }

    /// Householder QR of a square or tall matrix: `self = Q R` with `Q`
    /// orthogonal (`rows x rows`), `R` upper triangular with nonnegative
    /// diagonal. Column `j` of `Q` spans together with the earlier columns
    /// the span of the first `j + 1` input columns.
    pub fn qr(&self) -> (Matrix, Matrix) {
        let (m, n) = (self.rows, self.cols);
        let mut r = self.clone();
        let mut q = Matrix::identity(m);
        for k in 0..n.min(m.saturating_sub(1)) {
            let norm: f64 = (k..m).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
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
            for j in 0..n {
                let dot: f64 = (k..m).map(|i| v[i - k] * r[(i, j)]).sum();
                let f = 2.0 * dot / vnorm2;
                for i in k..m {
                    r[(i, j)] -= f * v[i - k];
                }
            }
            for i in 0..m {
                let dot: f64 = (k..m).map(|l| q[(i, l)] * v[l - k]).sum();
                let f = 2.0 * dot / vnorm2;
                for l in k..m {
                    q[(i, l)] -= f * v[l - k];
                }
            }
        }
        for k in 0..n.min(m) {
            if r[(k, k)] < 0.0 {
                for j in 0..n {
                    r[(k, j)] = -r[(k, j)];
                }
                for i in 0..m {
                    q[(i, k)] = -q[(i, k)];
                }
            }
            for i in k + 1..m {
                r[(i, k)] = 0.0;
            }
        }
        (q, r)
    }

    /// Copy scaled to unit Frobenius norm, plus the log of the removed scale.
    pub fn normalized(&self) -> (Matrix, f64) {
        let n = self.frobenius_norm();
        if n == 0.0 || !n.is_finite() {
            return (self.clone(), 0.0);
        }
        (self.scaled(1.0 / n), n.ln())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Mul for Matrix {
    type Output = Matrix;
    fn mul(self, rhs: Matrix) -> Matrix {
        &self * &rhs
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
