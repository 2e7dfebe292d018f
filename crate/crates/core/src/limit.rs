//! Limit sets, boundary maps and expansion along rays.

use rayon::prelude::*;

use crate::certify::{fold_ball, UruCertificate};
use crate::error::{Error, Result};
use crate::flag::{attracting_flag, contraction_limits, distance, expansion_rate, is_antipodal, ContractionOptions, Flag};
use crate::linalg::ScaledElement;
use crate::representation::Representation;
use crate::weyl::FaceType;
use crate::words::{cyclically_reduced_words, Word};

/// Points closer than this are merged.
pub const DEDUP_DISTANCE: f64 = 1e-6;
/// Root gap below which a prefix's singular frame is not trusted.
pub const MIN_FRAME_GAP: f64 = 1.0;

#[derive(Clone, Debug)]
pub struct LimitPoint {
    pub flag: Flag,
    pub word: Word,
}

#[derive(Clone, Debug)]
pub struct LimitSample {
    pub face: FaceType,
    pub points: Vec<LimitPoint>,
    /// Smallest pairwise antipodality margin, if there are two points.
    pub min_margin: Option<f64>,
    /// Words skipped as not regular enough.
    pub skipped: usize,
    /// Whether the representation carried a passing certificate.
    pub certified: bool,
}

impl LimitSample {
    /// A sample from explicit flags (all of one ι-invariant type).
    pub fn from_flags(face: FaceType, flags: Vec<Flag>) -> Result<Self> {
        let points = flags.into_iter().map(|flag| LimitPoint { flag, word: Word::empty() }).collect();
        let mut s = Self { face, points, min_margin: None, skipped: 0, certified: false };
        s.min_margin = s.pairwise_margin()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn with_certificate(mut self, cert: &UruCertificate) -> Self {
        self.certified = cert.pass && cert.face == self.face;
        self
    }

    fn pairwise_margin(&self) -> Result<Option<f64>> {
        if self.points.len() < 2 || !self.face.is_iota_invariant() {
            return Ok(None);
        }
        let n = self.points.len();
        let m = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut m = f64::INFINITY;
                for j in i + 1..n {
                    m = m.min(is_antipodal(&self.points[i].flag, &self.points[j].flag)?.margin);
                }
                Ok(m)
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        Ok(Some(m))
    }
}

/// Attracting flags of `ρ(w)^N` for the cyclically reduced words `w` of
/// length `word_length`, taken in shortlex order, merged when closer than
/// `DEDUP_DISTANCE`.
pub fn limit_set_sample(rho: &Representation, face: &FaceType, word_length: usize, power: u64) -> Result<LimitSample> {
    if face.dim() != rho.dim() {
        return Err(Error::DimMismatch { expected: rho.dim(), found: face.dim() });
    }
    if power < 2 {
        return Err(Error::Invalid("power must be at least 2".into()));
    }
    let opts = ContractionOptions { compact_samples: 0, min_gap: MIN_FRAME_GAP, ..ContractionOptions::default() };
    let words = cyclically_reduced_words(rho.rank(), word_length);
    let flags: Vec<Result<Option<Flag>>> = words
        .par_iter()
        .map(|w| {
            let g = rho.evaluate(w)?;
            match contraction_limits(&[g.clone(), g.pow(power)], face, &opts) {
                Ok(c) => Ok(Some(c.tau_plus)),
                Err(Error::NotRegular { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut points: Vec<LimitPoint> = Vec::new();
    let mut skipped = 0;
    for (w, f) in words.into_iter().zip(flags) {
        let Some(flag) = f? else {
            skipped += 1;
            continue;
        };
        let mut dup = false;
        for p in &points {
            if distance(&p.flag, &flag)? < DEDUP_DISTANCE {
                dup = true;
                break;
            }
        }
        if !dup {
            points.push(LimitPoint { flag, word: w });
        }
    }
    let mut sample = LimitSample { face: face.clone(), points, min_margin: None, skipped, certified: false };
    sample.min_margin = sample.pairwise_margin()?;
    Ok(sample)
}

#[derive(Clone, Debug)]
pub struct BoundarySample {
    /// Flags of the prefixes of length `1..=n`.
    pub flags: Vec<Flag>,
    /// Distances between consecutive flags.
    pub increments: Vec<f64>,
    pub last_gap: f64,
}

impl BoundarySample {
    pub fn limit(&self) -> &Flag {
        self.flags.last().expect("nonempty")
    }

    pub fn converged(&self, tol: f64) -> bool {
        self.increments.last().is_some_and(|&x| x < tol)
    }
}

fn prefix_elements(rho: &Representation, ray: &Word, n: usize) -> Result<Vec<ScaledElement>> {
    if !ray.is_reduced() {
        return Err(Error::NotReduced(ray.to_string()));
    }
    if n == 0 || n > ray.len() {
        return Err(Error::Invalid(format!("need 1 <= n <= {} prefix letters, got {n}", ray.len())));
    }
    let mut out = Vec::with_capacity(n);
    let mut g = ScaledElement::identity(rho.dim());
    for &l in &ray.letters()[..n] {
        if l.generator() >= rho.rank() {
            return Err(Error::UnknownGenerator(l.symbol().to_string()));
        }
        g = g.mul(rho.letter(l));
        out.push(g.clone());
    }
    Ok(out)
}

/// Flags of `ρ(ζ_k)` from leading singular subspaces, `k = 1..=n`, along a
/// finite prefix of a ray.
pub fn boundary_map_sample(rho: &Representation, face: &FaceType, ray: &Word, n: usize) -> Result<BoundarySample> {
    let gs = prefix_elements(rho, ray, n)?;
    let last_gap = gs[n - 1].cartan().min_gap(face)?;
    if !(last_gap > MIN_FRAME_GAP) {
        return Err(Error::NotRegular { gap: last_gap });
    }
    let flags = gs.iter().map(|g| attracting_flag(g, face)).collect::<Result<Vec<_>>>()?;
    let increments = flags.windows(2).map(|p| distance(&p[0], &p[1])).collect::<Result<Vec<_>>>()?;
    Ok(BoundarySample { flags, increments, last_gap })
}

#[derive(Clone, Debug)]
pub struct ExpansionSeries {
    /// `ln ε(ρ(ζ_k)⁻¹, β(ζ))` for `k = 0..=n`.
    pub log_rates: Vec<f64>,
    /// Least-squares slope of `log_rates` against `k`.
    pub slope: f64,
    pub intercept: f64,
    /// Whether the last third reaches above the first third by more than
    /// one unit of `ln ε`.
    pub diverging: bool,
    /// Whether the boundary flag converged to `1e-6`; when it did not,
    /// the frame of the full prefix is used anyway.
    pub boundary_converged: bool,
}

fn least_squares(ys: &[f64]) -> (f64, f64) {
    let n = ys.len() as f64;
    let mx = (ys.len() - 1) as f64 / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, &y) in ys.iter().enumerate() {
        let dx = k as f64 - mx;
        sxy += dx * (y - my);
        sxx += dx * dx;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

/// Expansion of the inverse prefixes at the boundary point of the ray.
/// The boundary point is read off the whole ray prefix, the series runs
/// over its first `n` letters.
pub fn expansion_series(rho: &Representation, face: &FaceType, ray: &Word, n: usize) -> Result<ExpansionSeries> {
    let full = prefix_elements(rho, ray, ray.len())?;
    let (beta, boundary_converged) = match boundary_map_sample(rho, face, ray, ray.len()) {
        Ok(b) => (b.limit().clone(), b.converged(1e-6)),
        Err(Error::NotRegular { .. }) => (attracting_flag(&full[ray.len() - 1], face)?, false),
        Err(e) => return Err(e),
    };
    if n > ray.len() {
        return Err(Error::Invalid(format!("series length {n} exceeds the ray prefix {}", ray.len())));
    }
    let mut log_rates = vec![0.0];
    for g in &full[..n] {
        log_rates.push(expansion_rate(g.inverse().direction(), &beta)?.ln());
    }
    let (slope, intercept) = least_squares(&log_rates);
    let third = (log_rates.len() / 3).max(1);
    let head = log_rates[..third].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tail = log_rates[log_rates.len() - third..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ExpansionSeries { log_rates, slope, intercept, diverging: tail > head + 1.0, boundary_converged })
}

/// Minimum expansion above one that counts as a witness.
pub const WITNESS_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct ExpansionWitness {
    /// Shortest word attaining the largest rate in the ball, when that
    /// rate exceeds `1 + WITNESS_MARGIN`.
    pub word: Option<Word>,
    pub rate: f64,
    pub best: Word,
}

/// For each sampled limit flag, the most expanding element of the ball.
pub fn expansion_at_limit_set(rho: &Representation, sample: &LimitSample, radius: usize) -> Result<Vec<ExpansionWitness>> {
    if sample.is_empty() {
        return Err(Error::Invalid("empty limit sample".into()));
    }
    let mut out = Vec::with_capacity(sample.len());
    for p in &sample.points {
        let (rate, best) = fold_ball(
            rho,
            radius,
            || Ok((f64::NEG_INFINITY, Word::empty())),
            |acc: &mut Result<(f64, Word)>, w, g| {
                if let Ok((best, bw)) = acc {
                    match expansion_rate(g.direction(), &p.flag) {
                        Ok(r) if r > *best || (r == *best && w < bw) => {
                            *best = r;
                            *bw = w.clone();
                        }
                        Ok(_) => {}
                        Err(e) => *acc = Err(e),
                    }
                }
            },
            |a, b| match (a, b) {
                (Ok(a), Ok(b)) => Ok(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a }),
                (Err(e), _) | (_, Err(e)) => Err(e),
            },
        )?;
        let word = (rate >= 1.0 + WITNESS_MARGIN).then(|| best.clone());
        out.push(ExpansionWitness { word, rate, best });
    }
    Ok(out)
}
