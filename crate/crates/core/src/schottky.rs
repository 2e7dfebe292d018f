//! Schottky representations `A ↦ α^m, B ↦ β^n` and ping-pong certificates.

use rand::Rng;

use crate::certify::{certify_uru_with, UruCertificate, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::flag::{act_scaled, attracting_fixed_flag, distance, is_antipodal, Flag};
use crate::linalg::{Matrix, ScaledElement, Tolerances};
use crate::representation::Representation;
use crate::sampling;
use crate::weyl::FaceType;
use crate::words::Letter;

/// `C · diag(eigenvalues) · C⁻¹`.
pub fn make_axial(eigenvalues: &[f64], conjugator: &Matrix) -> Result<Matrix> {
    make_axial_with(eigenvalues, conjugator, &Tolerances::default())
}

pub fn make_axial_with(eigenvalues: &[f64], conjugator: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let d = conjugator.ensure_square()?;
    if eigenvalues.len() != d {
        return Err(Error::BadEigenvalues(format!("{} values for dimension {d}", eigenvalues.len())));
    }
    if eigenvalues.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::BadEigenvalues("eigenvalues must be positive".into()));
    }
    if eigenvalues.windows(2).any(|p| p[0] < p[1]) {
        return Err(Error::BadEigenvalues("eigenvalues must be non-increasing".into()));
    }
    let product: f64 = eigenvalues.iter().product();
    if (product - 1.0).abs() > tol.det_tol {
        return Err(Error::BadEigenvalues(format!("product {product} is not 1")));
    }
    let inv = conjugator.inverse()?;
    Ok(&(conjugator * &Matrix::diag(eigenvalues)) * &inv)
}

/// Product of Givens rotations by `theta` in the planes `(i, i+1)`.
pub fn staircase_rotation(d: usize, theta: f64) -> Matrix {
    (0..d - 1).fold(Matrix::identity(d), |acc, i| &acc * &Matrix::givens(d, i, i + 1, theta))
}

/// 2×2 → 3×3 symmetric square in the orthonormal basis
/// `x², √2·xy, y²`, so orthogonal matrices stay orthogonal.
pub fn symmetric_square(g: &Matrix) -> Result<Matrix> {
    if g.rows() != 2 || g.cols() != 2 {
        return Err(Error::DimMismatch { expected: 2, found: g.rows().max(g.cols()) });
    }
    let (a, b, c, d) = (g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    let s = std::f64::consts::SQRT_2;
    Matrix::from_rows(&[
        vec![a * a, s * a * b, b * b],
        vec![s * a * c, a * d + b * c, s * b * d],
        vec![c * c, s * c * d, d * d],
    ])
}

#[derive(Clone, Debug)]
pub struct AxialPair {
    pub alpha: Matrix,
    pub beta: Matrix,
}

impl AxialPair {
    pub fn new(alpha: Matrix, beta: Matrix) -> Result<Self> {
        let d = alpha.ensure_square()?;
        if beta.ensure_square()? != d {
            return Err(Error::DimMismatch { expected: d, found: beta.dim() });
        }
        Ok(Self { alpha, beta })
    }

    /// `α = C diag(λ) C⁻¹` and `β = R α R⁻¹` with `R` the staircase
    /// rotation by `theta`.
    pub fn from_eigenvalues(eigenvalues: &[f64], conjugator: &Matrix, theta: f64) -> Result<Self> {
        let alpha = make_axial(eigenvalues, conjugator)?;
        let r = staircase_rotation(alpha.dim(), theta);
        let beta = &(&r * &alpha) * &r.transpose();
        Self::new(alpha, beta)
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    /// `(α₊, α₋, β₊, β₋)`.
    pub fn fixed_flags(&self, face: &FaceType) -> Result<[Flag; 4]> {
        let a = ScaledElement::from_matrix(&self.alpha)?;
        let b = ScaledElement::from_matrix(&self.beta)?;
        let opp = face.opposite();
        Ok([
            attracting_fixed_flag(&a, face)?,
            attracting_fixed_flag(&a.inverse(), &opp)?,
            attracting_fixed_flag(&b, face)?,
            attracting_fixed_flag(&b.inverse(), &opp)?,
        ])
    }
}

#[derive(Clone, Debug)]
pub struct Genericity {
    pub generic: bool,
    pub margin: f64,
    /// Antipodality margins of the pairs
    /// `α₊α₋, α₊β₊, α₊β₋, α₋β₊, α₋β₋, β₊β₋`.
    pub margins: [f64; 6],
}

/// Whether the four fixed flags are pairwise antipodal.
pub fn genericity_check(pair: &AxialPair, face: &FaceType) -> Result<Genericity> {
    genericity_check_with(pair, face, &Tolerances::default())
}

pub fn genericity_check_with(pair: &AxialPair, face: &FaceType, tol: &Tolerances) -> Result<Genericity> {
    face.ensure_iota_invariant()?;
    let f = pair.fixed_flags(face)?;
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut margins = [0.0; 6];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        margins[k] = is_antipodal(&f[i], &f[j])?.margin;
    }
    let margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Genericity { generic: margin > tol.rank_tol, margin, margins })
}

/// Free rank-two representation `A ↦ α^m, B ↦ β^n`.
pub fn schottky_rep(pair: &AxialPair, m: u64, n: u64) -> Result<Representation> {
    if m == 0 || n == 0 {
        return Err(Error::Invalid("powers must be positive".into()));
    }
    let a = ScaledElement::from_matrix(&pair.alpha)?.pow(m);
    let b = ScaledElement::from_matrix(&pair.beta)?.pow(n);
    Representation::from_elements(vec![a, b])
}

#[derive(Clone, Debug)]
pub struct PingPongOptions {
    /// Ball radius as a fraction of half the smallest center distance.
    pub multiplier: f64,
    /// Sample points per ball (or per circle in dimension two).
    pub samples: usize,
    pub seed: u64,
}

impl Default for PingPongOptions {
    fn default() -> Self {
        Self { multiplier: 0.8, samples: 2048, seed: sampling::DEFAULT_SEED }
    }
}

#[derive(Clone, Debug)]
pub struct PingPongCertificate {
    pub radius: f64,
    /// Center of the attracting ball of each letter, indexed by letter.
    pub centers: Vec<Flag>,
    /// `radius - max distance of the image to the center`, per letter.
    pub margins: Vec<f64>,
    pub samples: usize,
    pub pass: bool,
}

impl PingPongCertificate {
    pub fn margin(&self) -> f64 {
        self.margins.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Point at flag distance about `t` from `center` in a random direction,
/// along the orthogonal curve `F · cayley(sX)`.
fn ball_point<R: Rng + ?Sized>(center: &Flag, target: f64, rng: &mut R) -> Result<Flag> {
    let d = center.dim();
    let face = center.face();
    let mut x = sampling::gaussian_matrix(d, d, rng);
    for i in 0..d {
        for j in 0..d {
            if face.block_of(i) <= face.block_of(j) {
                x[(i, j)] = 0.0;
            }
        }
    }
    let skew = x.sub(&x.transpose());
    let norm = crate::linalg::singular_values(&skew)[0];
    let cayley = |s: f64| -> Result<Flag> {
        let half = skew.scaled(s / 2.0);
        let plus = Matrix::identity(d).add(&half);
        let minus = Matrix::identity(d).sub(&half);
        let q = &minus.inverse()? * &plus;
        Flag::new(face.clone(), &(center.frame() * &q))
    };
    // Rotation angles 2·atan(s·|x|/2) stay below π/2 on this range.
    let (mut lo, mut hi) = (0.0, 2.0 / norm);
    if distance(&cayley(hi)?, center)? <= target {
        return cayley(hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if distance(&cayley(mid)?, center)? <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    cayley(lo)
}

fn lines_outside(center: &Flag, radius: f64, samples: usize) -> Result<Vec<Flag>> {
    let face = center.face().clone();
    let c0 = center.frame().column(0);
    let angle0 = c0[1].atan2(c0[0]);
    let mut out = Vec::with_capacity(samples + 2);
    let arc = std::f64::consts::PI - 2.0 * radius;
    for k in 0..=samples {
        let theta = angle0 + radius + arc * k as f64 / samples as f64;
        out.push(Flag::new(face.clone(), &Matrix::rotation(theta))?);
    }
    Ok(out)
}

/// Numerical ping-pong check for the generators and their inverses.
///
/// Each letter `x` gets the ball `U_x` of the common radius around its
/// attracting fixed flag. In dimension two the test set for `x` is the
/// complement of `U_{x⁻¹}` (a closed arc, sampled on a grid including its
/// endpoints); otherwise it is the union of the balls `U_y`, `y ≠ x⁻¹`,
/// sampled at random directions on their boundaries and inside. The
/// certificate passes when every image lands strictly inside `U_x`.
pub fn pingpong_certificate(rho: &Representation, face: &FaceType, opts: &PingPongOptions) -> Result<PingPongCertificate> {
    face.ensure_iota_invariant()?;
    let letters: Vec<Letter> = rho.letters().collect();
    let centers = letters.iter().map(|&l| attracting_fixed_flag(rho.letter(l), face)).collect::<Result<Vec<_>>>()?;
    let mut min_dist = f64::INFINITY;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            min_dist = min_dist.min(distance(&centers[i], &centers[j])?);
        }
    }
    let radius = opts.multiplier * min_dist / 2.0;
    if !(min_dist > 2.0 * radius) {
        return Err(Error::NeighborhoodsOverlap { distance: min_dist, radius });
    }
    let line = face.dim() == 2;
    let mut rng = sampling::rng(opts.seed);
    let per_ball = opts.samples.max(1);
    let mut balls: Vec<Vec<Flag>> = Vec::new();
    if !line {
        for c in &centers {
            let mut pts = vec![c.clone()];
            for k in 0..per_ball {
                let frac = if k % 4 == 0 { 1.0 } else { rng.random::<f64>().sqrt() };
                pts.push(ball_point(c, radius * frac, &mut rng)?);
            }
            balls.push(pts);
        }
    }
    let mut margins = Vec::with_capacity(letters.len());
    let mut samples = 0;
    for (i, &x) in letters.iter().enumerate() {
        let g = rho.letter(x);
        let back = x.inverse().index();
        let domain: Vec<Flag> = if line {
            lines_outside(&centers[back], radius, per_ball)?
        } else {
            (0..letters.len()).filter(|&j| j != back).flat_map(|j| balls[j].iter().cloned()).collect()
        };
        samples += domain.len();
        let mut worst: f64 = 0.0;
        for p in &domain {
            worst = worst.max(distance(&act_scaled(g, p)?, &centers[i])?);
        }
        margins.push(radius - worst);
    }
    let pass = margins.iter().all(|&m| m > 0.0);
    Ok(PingPongCertificate { radius, centers, margins, samples, pass })
}

#[derive(Clone, Debug)]
pub struct PowerSearch {
    pub power: u64,
    pub pingpong: PingPongCertificate,
    pub uru: UruCertificate,
}

#[derive(Clone, Debug)]
pub struct PowerSearchOptions {
    pub pingpong: PingPongOptions,
    pub budget: u64,
}

impl Default for PowerSearchOptions {
    fn default() -> Self {
        Self { pingpong: PingPongOptions::default(), budget: DEFAULT_BUDGET }
    }
}

/// Smallest `m <= cap` such that `ρ_{m,m}` passes ping-pong and URU.
pub fn find_min_powers(
    pair: &AxialPair,
    face: &FaceType,
    radius: usize,
    min_slope: f64,
    cap: u64,
    opts: &PowerSearchOptions,
) -> Result<PowerSearch> {
    let g = genericity_check(pair, face)?;
    if !g.generic {
        return Err(Error::NotGeneric { margin: g.margin });
    }
    for m in 1..=cap {
        let rho = schottky_rep(pair, m, m)?;
        let pingpong = pingpong_certificate(&rho, face, &opts.pingpong)?;
        if !pingpong.pass {
            continue;
        }
        let uru = certify_uru_with(&rho, face, radius, min_slope, opts.budget)?;
        if uru.pass {
            return Ok(PowerSearch { power: m, pingpong, uru });
        }
    }
    Err(Error::CapExceeded { cap })
}
