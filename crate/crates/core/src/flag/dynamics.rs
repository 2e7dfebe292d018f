use super::flag::{act_scaled, distance, is_antipodal, random_flag, splice_frame, Flag};
use crate::error::{Error, Result};
use crate::linalg::ScaledElement;
use crate::sampling::{self, DEFAULT_SEED};
use crate::weyl::FaceType;

/// Flag spanned by the leading left singular vectors of `g`.
///
/// Leading directions come from the forward factor, trailing ones from the
/// right singular vectors of the inverse, so both ends stay accurate for
/// long words.
pub fn attracting_flag(g: &ScaledElement, face: &FaceType) -> Result<Flag> {
    let d = g.dim();
    if face.dim() != d {
        return Err(Error::DimMismatch { expected: face.dim(), found: d });
    }
    let (fwd, inv, h) = g.split_frames();
    let frame = splice_frame(&fwd.u, h, |k| inv.v.column(d - 1 - k))?;
    Ok(Flag::from_orthogonal(face.clone(), frame))
}

/// Attracting flag of `g⁻¹`, of the opposite type.
pub fn repelling_flag(g: &ScaledElement, face: &FaceType) -> Result<Flag> {
    attracting_flag(&g.inverse(), &face.opposite())
}

/// Root gap beyond which a power's attracting flag is taken as the fixed flag.
const FIXED_FLAG_GAP: f64 = 30.0;
/// Largest log spread `log σ_1 - log σ_d` at which every singular value is
/// still resolved by one of the two factors.
const MAX_SPREAD: f64 = 66.0;
/// Smallest gap accepted when the spread limit stops the squaring early.
const MIN_FIXED_FLAG_GAP: f64 = 10.0;
const MAX_SQUARINGS: usize = 24;

/// Attracting fixed flag of a proximal element, read off a high power.
pub fn attracting_fixed_flag(g: &ScaledElement, face: &FaceType) -> Result<Flag> {
    let mut p = g.clone();
    let mut gap = 0.0;
    for _ in 0..=MAX_SQUARINGS {
        let v = p.cartan();
        gap = v.min_gap(face)?;
        if gap > FIXED_FLAG_GAP {
            return attracting_flag(&p, face);
        }
        let c = v.components();
        if 2.0 * (c[0] - c[c.len() - 1]) > MAX_SPREAD {
            if gap > MIN_FIXED_FLAG_GAP {
                return attracting_flag(&p, face);
            }
            break;
        }
        p = p.mul(&p);
    }
    Err(Error::NotProximal { gap })
}

#[derive(Clone, Debug)]
pub struct ContractionOptions {
    /// Smallest root gap accepted at the last term.
    pub min_gap: f64,
    /// Size of the sampled compact subset of `C(τ₋)`.
    pub compact_samples: usize,
    /// Antipodality margin to `τ₋` defining the compact subset.
    pub compact_margin: f64,
    pub seed: u64,
}

impl Default for ContractionOptions {
    fn default() -> Self {
        Self { min_gap: 1.0, compact_samples: 100, compact_margin: 0.1, seed: DEFAULT_SEED }
    }
}

#[derive(Clone, Debug)]
pub struct Contraction {
    pub tau_minus: Flag,
    pub tau_plus: Flag,
    /// `sup_σ d(g_n σ, τ₊)` over the sampled compact set, per term.
    pub decay: Vec<f64>,
    /// Whether `decay` never increases (up to rounding).
    pub monotone: bool,
    pub last_gap: f64,
    pub samples: Vec<Flag>,
}

/// Limits `τ₋, τ₊` of a contracting sequence and the uniform decay of
/// `g_n|_K → τ₊` on a sampled compact `K ⊂ C(τ₋)`.
pub fn contraction_limits(gs: &[ScaledElement], face: &FaceType, opts: &ContractionOptions) -> Result<Contraction> {
    if gs.len() < 2 {
        return Err(Error::Invalid("a contracting sequence needs at least two terms".into()));
    }
    let first_gap = gs[0].cartan().min_gap(face)?;
    let last = &gs[gs.len() - 1];
    let last_gap = last.cartan().min_gap(face)?;
    if !(last_gap > opts.min_gap) || !(last_gap > first_gap) {
        return Err(Error::NotRegular { gap: last_gap });
    }
    let tau_plus = attracting_flag(last, face)?;
    let tau_minus = repelling_flag(last, face)?;

    let mut rng = sampling::rng(opts.seed);
    let mut samples = Vec::with_capacity(opts.compact_samples);
    let mut attempts = 0usize;
    while samples.len() < opts.compact_samples {
        attempts += 1;
        if attempts > 1000 * opts.compact_samples.max(1) {
            return Err(Error::Invalid("could not sample the compact set; lower compact_margin".into()));
        }
        let sigma = random_flag(face, &mut rng);
        if is_antipodal(&sigma, &tau_minus)?.margin > opts.compact_margin {
            samples.push(sigma);
        }
    }

    let mut decay = Vec::with_capacity(gs.len());
    for g in gs {
        let mut sup: f64 = 0.0;
        for sigma in &samples {
            sup = sup.max(distance(&act_scaled(g, sigma)?, &tau_plus)?);
        }
        decay.push(sup);
    }
    let monotone = decay.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    Ok(Contraction { tau_minus, tau_plus, decay, monotone, last_gap, samples })
}
