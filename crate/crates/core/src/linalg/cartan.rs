use super::matrix::Matrix;
use super::svd::svd;
use super::tolerance::Tolerances;
use crate::error::{Error, Result};
use crate::weyl::FaceType;

/// Log singular values in non-increasing order: the vector-valued distance
/// from the basepoint `eK` to `g·eK` in the symmetric space of SL(d,R).
#[derive(Clone, Debug, PartialEq)]
pub struct CartanVector(Vec<f64>);

impl CartanVector {
    /// Sorts the given values into the closed Weyl chamber.
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self(values)
    }

    pub fn zero(d: usize) -> Self {
        Self(vec![0.0; d])
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Image under the opposition involution `v ↦ -w₀v`.
    pub fn opposite(&self) -> Self {
        Self(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn sup_distance(&self, other: &CartanVector) -> f64 {
        self.0.iter().zip(&other.0).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `self - a - b` in the sup norm.
    pub fn additivity_defect(&self, a: &CartanVector, b: &CartanVector) -> f64 {
        self.0
            .iter()
            .zip(&a.0)
            .zip(&b.0)
            .fold(0.0, |m, ((x, y), z)| m.max((x - y - z).abs()))
    }

    pub fn min_gap(&self, face: &FaceType) -> Result<f64> {
        Ok(root_gaps(self, face)?.into_iter().fold(f64::INFINITY, f64::min))
    }
}

/// Cartan decomposition `g = k1 · exp(diag(a)) · k2`.
#[derive(Clone, Debug)]
pub struct KakDecomposition {
    pub k1: Matrix,
    pub a: CartanVector,
    pub k2: Matrix,
}

impl KakDecomposition {
    pub fn recompose(&self) -> Matrix {
        let exp: Vec<f64> = self.a.components().iter().map(|x| x.exp()).collect();
        &(&self.k1 * &Matrix::diag(&exp)) * &self.k2
    }
}

fn check_input(g: &Matrix) -> Result<usize> {
    let d = g.ensure_square()?;
    if !g.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(d)
}

pub fn cartan_projection(g: &Matrix) -> Result<CartanVector> {
    cartan_projection_with(g, &Tolerances::default())
}

pub fn cartan_projection_with(g: &Matrix, tol: &Tolerances) -> Result<CartanVector> {
    Ok(kak_with(g, tol)?.a)
}

pub fn kak(g: &Matrix) -> Result<KakDecomposition> {
    kak_with(g, &Tolerances::default())
}

pub fn kak_with(g: &Matrix, tol: &Tolerances) -> Result<KakDecomposition> {
    check_input(g)?;
    let d = svd(g);
    let smallest = *d.sigma.last().unwrap_or(&0.0);
    if smallest <= tol.svd_tol {
        return Err(Error::SingularInput { smallest });
    }
    let a = CartanVector(d.sigma.iter().map(|s| s.ln()).collect());
    Ok(KakDecomposition { k1: d.u, a, k2: d.v.transpose() })
}

/// Simple-root values `v_i - v_{i+1}` for each pivot `i` of the face.
pub fn root_gaps(v: &CartanVector, face: &FaceType) -> Result<Vec<f64>> {
    if face.dim() != v.dim() {
        return Err(Error::BadFace(format!(
            "face lives in dimension {}, Cartan vector in {}",
            face.dim(),
            v.dim()
        )));
    }
    let c = v.components();
    Ok(face.pivots().iter().map(|&i| c[i - 1] - c[i]).collect())
}
