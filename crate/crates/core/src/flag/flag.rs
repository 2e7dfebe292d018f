use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, Matrix, ScaledElement, Tolerances};
use crate::sampling::random_orthogonal;
use crate::weyl::{coset_rep_from_blocks, FaceType, WeylElement};

/// A flag of type `face`, stored as an orthogonal frame whose leading
/// `D_j` columns span the `j`-th subspace.
///
/// The frame is one representative among many; only the spans of the
/// leading columns at the pivots carry meaning.
#[derive(Clone, Debug)]
pub struct Flag {
    face: FaceType,
    frame: Matrix,
}

/// A full flag.
pub type Chamber = Flag;

/// Relative size below which a triangular pivot counts as zero.
const FRAME_RANK_EPS: f64 = 1e-14;

fn orthonormalize(m: &Matrix) -> Result<Matrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let (q, r) = m.qr();
    let scale = r.max_abs();
    let smallest = (0..m.cols()).map(|k| r[(k, k)].abs()).fold(f64::INFINITY, f64::min);
    if scale == 0.0 || smallest <= FRAME_RANK_EPS * scale {
        return Err(Error::SingularInput { smallest: if scale == 0.0 { 0.0 } else { smallest / scale } });
    }
    Ok(q)
}

/// Orthonormal frame whose first `h` columns are those of `lead` and whose
/// column `k >= h` comes from `trail(k)`, with later columns taking
/// precedence: trailing candidates are orthogonalized from the last one
/// backwards. A candidate that collapses (its direction is not resolved by
/// either route) is replaced by the best standard basis vector.
pub(crate) fn splice_frame(lead: &Matrix, h: usize, trail: impl Fn(usize) -> Vec<f64>) -> Result<Matrix> {
    let d = lead.rows();
    let mut cols: Vec<Vec<f64>> = (0..h).map(|k| lead.column(k)).collect();
    let mut tail: Vec<Vec<f64>> = Vec::with_capacity(d - h);
    let project = |v: &mut Vec<f64>, basis: &[Vec<f64>]| {
        for _ in 0..2 {
            for b in basis {
                let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
    };
    for k in (h..d).rev() {
        let mut v = trail(k);
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let done: Vec<Vec<f64>> = cols.iter().chain(tail.iter()).cloned().collect();
        project(&mut v, &done);
        let mut n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-8 {
            let mut best = (0.0, Vec::new());
            for i in 0..d {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                project(&mut e, &done);
                let ne = e.iter().map(|x| x * x).sum::<f64>().sqrt();
                if ne > best.0 {
                    best = (ne, e);
                }
            }
            (n, v) = best;
        }
        tail.push(v.into_iter().map(|x| x / n).collect());
    }
    cols.extend(tail.into_iter().rev());
    Matrix::from_columns(&cols)
}

impl Flag {
    /// Flag spanned by the leading columns of an invertible `basis`.
    pub fn new(face: FaceType, basis: &Matrix) -> Result<Self> {
        let d = basis.ensure_square()?;
        if d != face.dim() {
            return Err(Error::DimMismatch { expected: face.dim(), found: d });
        }
        Ok(Self { face, frame: orthonormalize(basis)? })
    }

    /// Trusts the caller that `frame` is orthogonal.
    pub(crate) fn from_orthogonal(face: FaceType, frame: Matrix) -> Self {
        Self { face, frame }
    }

    /// The standard flag `⟨e_1⟩ ⊂ ⟨e_1, e_2⟩ ⊂ ...` truncated to `face`.
    pub fn standard(face: FaceType) -> Self {
        let frame = Matrix::identity(face.dim());
        Self { face, frame }
    }

    /// `P_w` applied to the standard flag.
    pub fn from_permutation(face: FaceType, w: &WeylElement) -> Result<Self> {
        if w.dim() != face.dim() {
            return Err(Error::DimMismatch { expected: face.dim(), found: w.dim() });
        }
        Ok(Self { frame: w.permutation_matrix(), face })
    }

    pub fn face(&self) -> &FaceType {
        &self.face
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.face.dim()
    }

    /// Orthonormal basis of the `k`-dimensional member.
    pub fn subspace(&self, k: usize) -> Matrix {
        self.frame.leading_columns(k)
    }

    /// The same frame read as a flag of another type.
    pub fn with_face(&self, face: FaceType) -> Result<Self> {
        if face.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), found: face.dim() });
        }
        Ok(Self { face, frame: self.frame.clone() })
    }
}

fn check_dims(g: &Matrix, tau: &Flag) -> Result<()> {
    let d = g.ensure_square()?;
    if d != tau.dim() {
        return Err(Error::DimMismatch { expected: tau.dim(), found: d });
    }
    Ok(())
}

/// `g · τ`.
pub fn act(g: &Matrix, tau: &Flag) -> Result<Flag> {
    check_dims(g, tau)?;
    let frame = orthonormalize(&(g * &tau.frame))?;
    Ok(Flag { face: tau.face.clone(), frame })
}

/// `g · τ` for a log-scaled element.
///
/// Leading subspaces come from QR of `g F`; trailing ones from a reversed
/// QR of `g⁻ᵀ F`, whose trailing columns span the orthogonal complements
/// `(g V_k)^⊥`. Each column is taken from the route with the larger
/// relative pivot, so strongly contracted directions stay resolved.
pub fn act_scaled(g: &ScaledElement, tau: &Flag) -> Result<Flag> {
    check_dims(g.direction(), tau)?;
    let d = tau.dim();
    let a = g.direction() * &tau.frame;
    let b = &g.inverse_direction().transpose() * &tau.frame;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite);
    }
    let (qa, ra) = a.qr();
    let reversed: Vec<Vec<f64>> = (0..d).rev().map(|j| b.column(j)).collect();
    let (qb, rb) = Matrix::from_columns(&reversed)?.qr();
    let na = a.frobenius_norm();
    let nb = b.frobenius_norm();
    let h = (0..d)
        .take_while(|&k| ra[(k, k)].abs() / na >= rb[(d - 1 - k, d - 1 - k)].abs() / nb)
        .count()
        .max(1);
    let frame = splice_frame(&qa, h, |k| qb.column(d - 1 - k))?;
    Ok(Flag { face: tau.face.clone(), frame })
}

/// Largest principal angle over the pivot subspaces.
pub fn distance(a: &Flag, b: &Flag) -> Result<f64> {
    if a.face != b.face {
        return Err(Error::FaceMismatch(format!("{} vs {}", a.face, b.face)));
    }
    let mut worst: f64 = 0.0;
    for &k in a.face.pivots() {
        let qa = a.subspace(k);
        let qb = b.subspace(k);
        let proj = &qa * &(&qa.transpose() * &qb);
        let resid = qb.sub(&proj);
        let s = singular_values(&resid)[0].min(1.0);
        worst = worst.max(s.asin());
    }
    Ok(worst)
}

/// Outcome of an antipodality test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Antipodality {
    pub antipodal: bool,
    /// Smallest singular value of `[V_i | W_{d-i}]` over the pivots `i`.
    pub margin: f64,
}

pub fn is_antipodal(a: &Flag, b: &Flag) -> Result<Antipodality> {
    is_antipodal_with(a, b, &Tolerances::default())
}

/// Transversality of `a` (type `D`) and `b` (type `d - D`): each
/// `V_i ∩ W_{d-i}` must be zero.
pub fn is_antipodal_with(a: &Flag, b: &Flag, tol: &Tolerances) -> Result<Antipodality> {
    let d = a.dim();
    if b.face != a.face.opposite() {
        return Err(Error::FaceMismatch(format!(
            "antipodality needs types {} and {}, got {}",
            a.face,
            a.face.opposite(),
            b.face
        )));
    }
    let mut margin = f64::INFINITY;
    for &i in a.face.pivots() {
        let m = a.subspace(i).hcat(&b.subspace(d - i))?;
        margin = margin.min(singular_values(&m)[d - 1]);
    }
    Ok(Antipodality { antipodal: margin > tol.rank_tol, margin })
}

pub fn relative_position(sigma: &Chamber, tau: &Flag) -> Result<WeylElement> {
    relative_position_with(sigma, tau, &Tolerances::default())
}

/// Position of the chamber `σ` relative to `τ`: the shortest `π` in its
/// left coset of the stabilizer of `τ`'s type with
/// `dim(σ_i ∩ τ_j) = #{k <= i : π(k) <= j}`.
///
/// Singular values within a factor two of `rank_tol` make the rank
/// ambiguous and produce `DegeneratePosition`.
pub fn relative_position_with(sigma: &Chamber, tau: &Flag, tol: &Tolerances) -> Result<WeylElement> {
    let d = sigma.dim();
    if !sigma.face.is_full() {
        return Err(Error::BadFace(format!("relative position needs a chamber, got type {}", sigma.face)));
    }
    if tau.dim() != d {
        return Err(Error::DimMismatch { expected: d, found: tau.dim() });
    }
    let rank_tol = tol.rank_tol;
    let mut dims_at: Vec<usize> = tau.face.pivots().to_vec();
    dims_at.push(d);
    let nb = dims_at.len();
    // table[i][b] = dim(σ_i ∩ τ_{dims_at[b]}).
    let mut table = vec![vec![0usize; nb]; d + 1];
    for i in 1..=d {
        let si = sigma.subspace(i);
        for (b, &j) in dims_at.iter().enumerate() {
            table[i][b] = if i == d || j == d {
                i.min(j)
            } else {
                let m = si.hcat(&tau.subspace(j))?;
                let sv = singular_values(&m);
                if let Some(&s) = sv.iter().find(|&&s| s > 0.5 * rank_tol && s <= 2.0 * rank_tol) {
                    return Err(Error::DegeneratePosition { value: s, tol: rank_tol });
                }
                let rank = sv.iter().filter(|&&s| s > rank_tol).count();
                i + j - rank
            };
        }
    }
    let inconsistent = || Error::DegeneratePosition { value: f64::NAN, tol: rank_tol };
    let mut blocks = Vec::with_capacity(d);
    for i in 1..=d {
        let inc: Vec<usize> = (0..nb)
            .map(|b| table[i][b].checked_sub(table[i - 1][b]).filter(|&x| x <= 1))
            .collect::<Option<_>>()
            .ok_or_else(inconsistent)?;
        let first = inc.iter().position(|&x| x == 1).ok_or_else(inconsistent)?;
        if inc[first..].iter().any(|&x| x != 1) {
            return Err(inconsistent());
        }
        blocks.push(first);
    }
    let sizes: Vec<usize> = tau.face.blocks().iter().map(|r| r.len()).collect();
    for (b, &size) in sizes.iter().enumerate() {
        if blocks.iter().filter(|&&x| x == b).count() != size {
            return Err(inconsistent());
        }
    }
    Ok(coset_rep_from_blocks(&blocks, &tau.face))
}

/// A flag with a Haar-random frame.
pub fn random_flag<R: Rng + ?Sized>(face: &FaceType, rng: &mut R) -> Flag {
    Flag { face: face.clone(), frame: random_orthogonal(face.dim(), rng) }
}
