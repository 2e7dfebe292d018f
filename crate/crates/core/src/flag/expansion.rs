use super::flag::Flag;
use crate::error::{Error, Result};
use crate::linalg::{singular_values, Matrix};

/// Index pairs `(i, j)` of strictly block-lower entries: the chart
/// coordinates of the flag manifold near the standard flag.
fn chart_coordinates(tau: &Flag) -> Vec<(usize, usize)> {
    let face = tau.face();
    let d = face.dim();
    let mut out = Vec::new();
    for j in 0..d {
        for i in 0..d {
            if face.block_of(i) > face.block_of(j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn upper_triangular_inverse(r: &Matrix) -> Matrix {
    let n = r.dim();
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = 1.0 / r[(j, j)];
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|k| r[(i, k)] * inv[(k, j)]).sum();
            inv[(i, j)] = -s / r[(i, i)];
        }
    }
    inv
}

/// Differential of `τ ↦ g·τ` at `τ` together with the image flag.
///
/// Tangent vectors at a flag with frame `F` are strictly block-lower `X`
/// (the curve `F(I + tX)`), measured in the Frobenius norm; this metric is
/// invariant under the orthogonal group. Writing `gF = F'R` with `F'`
/// orthogonal and `R` upper triangular, the differential is
/// `X ↦ lower(R X R⁻¹)`. The overall scale of `g` cancels.
pub fn differential(g: &Matrix, tau: &Flag) -> Result<(Matrix, Flag)> {
    let d = g.ensure_square()?;
    if d != tau.dim() {
        return Err(Error::DimMismatch { expected: tau.dim(), found: d });
    }
    if !g.is_finite() {
        return Err(Error::NonFinite);
    }
    let (q, r) = (g * tau.frame()).qr();
    let scale = r.max_abs();
    let smallest = (0..d).map(|k| r[(k, k)]).fold(f64::INFINITY, f64::min);
    if !(smallest > 0.0) || smallest <= 1e-300 * scale.max(1.0) {
        return Err(Error::SingularInput { smallest });
    }
    let rinv = upper_triangular_inverse(&r);
    let coords = chart_coordinates(tau);
    let n = coords.len();
    let mut m = Matrix::zeros(n, n);
    for (p, &(i, j)) in coords.iter().enumerate() {
        for (c, &(a, b)) in coords.iter().enumerate() {
            // R is upper triangular, so only a >= i and b <= j contribute.
            if a >= i && b <= j {
                m[(p, c)] = r[(i, a)] * rinv[(b, j)];
            }
        }
    }
    Ok((m, Flag::from_orthogonal(tau.face().clone(), q)))
}

/// `(ε, ‖dg‖)`: smallest and largest singular values of the differential.
pub fn expansion_bounds(g: &Matrix, tau: &Flag) -> Result<(f64, f64)> {
    let (m, _) = differential(g, tau)?;
    let s = singular_values(&m);
    Ok((s[s.len() - 1], s[0]))
}

/// `ε(g, τ) = ‖(dg_τ)⁻¹‖⁻¹`.
pub fn expansion_rate(g: &Matrix, tau: &Flag) -> Result<f64> {
    Ok(expansion_bounds(g, tau)?.0)
}

/// Operator norm of `dg_τ`.
pub fn expansion_norm(g: &Matrix, tau: &Flag) -> Result<f64> {
    Ok(expansion_bounds(g, tau)?.1)
}
