//! Word-ball certification: root-gap profiles, the URU drift fit and the
//! midpoint additivity defect.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{root_gaps, CartanVector, ScaledElement};
use crate::representation::Representation;
use crate::weyl::FaceType;
use crate::words::{ball_size, reduced_words, walk, Word};

/// Default cap on the number of word evaluations per ball.
pub const DEFAULT_BUDGET: u64 = 5_000_000;

fn check_budget(rank: usize, radius: usize, budget: u64) -> Result<()> {
    let needed = ball_size(rank, radius);
    if needed > budget {
        return Err(Error::BallTooLarge { radius, needed, budget });
    }
    Ok(())
}

fn check_face(rho: &Representation, face: &FaceType) -> Result<()> {
    if face.dim() != rho.dim() {
        return Err(Error::DimMismatch { expected: rho.dim(), found: face.dim() });
    }
    Ok(())
}

/// Folds `visit` over every reduced word of length `1..=radius` with its
/// image. The ball is sharded by two-letter prefixes; shards are merged in
/// prefix order, so the result does not depend on scheduling.
pub fn fold_ball<T, Init, Visit, Merge>(rho: &Representation, radius: usize, init: Init, visit: Visit, merge: Merge) -> T
where
    T: Send,
    Init: Fn() -> T + Sync,
    Visit: Fn(&mut T, &Word, &ScaledElement) + Sync,
    Merge: Fn(T, T) -> T,
{
    let rank = rho.rank();
    let mut acc = init();
    if radius == 0 {
        return acc;
    }
    let depth = radius.min(2);
    for len in 1..depth {
        for w in reduced_words(rank, len) {
            let g = rho.evaluate(&w).expect("enumerated words are reduced");
            visit(&mut acc, &w, &g);
        }
    }
    let step = |s: &ScaledElement, l| s.mul(rho.letter(l));
    let parts: Vec<T> = reduced_words(rank, depth)
        .into_par_iter()
        .map(|prefix| {
            let mut part = init();
            let g = rho.evaluate(&prefix).expect("enumerated words are reduced");
            let mut w = prefix;
            walk(rank, radius, &mut w, &g, &step, &mut |w: &Word, g: &ScaledElement| visit(&mut part, w, g));
            part
        })
        .collect();
    parts.into_iter().fold(acc, merge)
}

/// Keeps the smaller value; ties go to the shortlex-smaller word.
fn better(value: f64, word: &Word, best: f64, best_word: &Word) -> bool {
    value < best || (value == best && word < best_word)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapRecord {
    pub length: usize,
    /// Minimum over the sphere of the smallest root gap on the face.
    pub min_gap: f64,
    /// Minimum over the sphere of the Cartan norm.
    pub min_norm: f64,
    /// A word attaining `min_gap`.
    pub argmin: Word,
    pub words: u64,
}

#[derive(Clone, Debug)]
pub struct GapProfile {
    pub face: FaceType,
    /// One record per length `1..=L`.
    pub records: Vec<GapRecord>,
}

impl GapProfile {
    pub fn radius(&self) -> usize {
        self.records.len()
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.min_gap).collect()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.min_norm).collect()
    }
}

pub fn gap_profile(rho: &Representation, face: &FaceType, radius: usize) -> Result<GapProfile> {
    gap_profile_with(rho, face, radius, DEFAULT_BUDGET)
}

/// Exact per-length minima of root gaps and Cartan norms over the ball.
pub fn gap_profile_with(rho: &Representation, face: &FaceType, radius: usize, budget: u64) -> Result<GapProfile> {
    check_face(rho, face)?;
    if radius == 0 {
        return Err(Error::Invalid("ball radius must be at least 1".into()));
    }
    check_budget(rho.rank(), radius, budget)?;
    type Acc = Vec<Option<GapRecord>>;
    let merge_one = |a: &mut Option<GapRecord>, b: GapRecord| match a {
        None => *a = Some(b),
        Some(r) => {
            r.words += b.words;
            r.min_norm = r.min_norm.min(b.min_norm);
            if better(b.min_gap, &b.argmin, r.min_gap, &r.argmin) {
                r.min_gap = b.min_gap;
                r.argmin = b.argmin;
            }
        }
    };
    let acc: Acc = fold_ball(
        rho,
        radius,
        || vec![None; radius],
        |acc: &mut Acc, w, g| {
            let v = g.cartan();
            let gap = v.min_gap(face).expect("face checked");
            let rec = GapRecord { length: w.len(), min_gap: gap, min_norm: v.norm(), argmin: w.clone(), words: 1 };
            merge_one(&mut acc[w.len() - 1], rec);
        },
        |mut a: Acc, b: Acc| {
            for (x, y) in a.iter_mut().zip(b) {
                if let Some(y) = y {
                    merge_one(x, y);
                }
            }
            a
        },
    );
    let records = acc.into_iter().map(|r| r.expect("every sphere is nonempty")).collect();
    Ok(GapProfile { face: face.clone(), records })
}

/// Affine lower bound `value(ℓ) >= slope·ℓ - intercept` fitted to a
/// sequence indexed by `ℓ = 1..=L` (with `value(0) = 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct DriftFit {
    /// Slope of the last edge of the lower convex minorant.
    pub slope: f64,
    /// Nonnegative offset making the bound hold on the whole range.
    pub intercept: f64,
    /// Secant slope over the last third of the range.
    pub tail_slope: f64,
}

pub fn drift_fit(values: &[f64]) -> DriftFit {
    let l = values.len();
    if l == 0 {
        return DriftFit { slope: 0.0, intercept: 0.0, tail_slope: 0.0 };
    }
    let pts: Vec<(f64, f64)> = std::iter::once((0.0, 0.0))
        .chain(values.iter().enumerate().map(|(i, &v)| ((i + 1) as f64, v)))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
    let slope = (b.1 - a.1) / (b.0 - a.0);
    let intercept = (slope * l as f64 - values[l - 1]).max(0.0);
    let mut s = l - l / 3;
    if s == l {
        s = l - 1;
    }
    let at = |k: usize| if k == 0 { 0.0 } else { values[k - 1] };
    let tail_slope = (at(l) - at(s)) / (l - s) as f64;
    DriftFit { slope, intercept, tail_slope }
}

/// Outcome of a URU check at a finite radius. A pass is evidence at that
/// radius, not a proof.
#[derive(Clone, Debug)]
pub struct UruCertificate {
    pub face: FaceType,
    pub radius: usize,
    /// Drift constants: `gap(ℓ) >= c·ℓ - a`.
    pub c: f64,
    pub a: f64,
    /// Quasi-isometry constants: `‖d_Δ‖ >= c_qi·ℓ - a_qi`.
    pub c_qi: f64,
    pub a_qi: f64,
    pub tail_slope: f64,
    pub min_slope: f64,
    /// `min(c - min_slope, tail_slope - c/2)`.
    pub margin: f64,
    pub pass: bool,
    pub profile: GapProfile,
}

pub fn certify_uru(rho: &Representation, face: &FaceType, radius: usize, min_slope: f64) -> Result<UruCertificate> {
    certify_uru_with(rho, face, radius, min_slope, DEFAULT_BUDGET)
}

pub fn certify_uru_with(
    rho: &Representation,
    face: &FaceType,
    radius: usize,
    min_slope: f64,
    budget: u64,
) -> Result<UruCertificate> {
    let profile = gap_profile_with(rho, face, radius, budget)?;
    Ok(certificate_from_profile(profile, min_slope))
}

pub fn certificate_from_profile(profile: GapProfile, min_slope: f64) -> UruCertificate {
    let drift = drift_fit(&profile.gaps());
    let qi = drift_fit(&profile.norms());
    let c = drift.slope;
    let margin = (c - min_slope).min(drift.tail_slope - c / 2.0);
    let pass = margin >= 0.0 && c > 0.0 && qi.slope > 0.0;
    UruCertificate {
        face: profile.face.clone(),
        radius: profile.radius(),
        c,
        a: drift.intercept,
        c_qi: qi.slope,
        a_qi: qi.intercept,
        tail_slope: drift.tail_slope,
        min_slope,
        margin,
        pass,
        profile,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefectRecord {
    pub length: usize,
    /// `max ‖d_Δ(w) - d_Δ(w₁) - d_Δ(w₂)‖∞` over the sphere, `w = w₁w₂`
    /// split at the midpoint.
    pub max_defect: f64,
    /// The same for the face's root gaps.
    pub max_gap_defect: f64,
    pub argmax: Word,
}

#[derive(Clone, Debug)]
pub struct DefectTable {
    pub face: FaceType,
    pub records: Vec<DefectRecord>,
}

impl DefectTable {
    /// Largest defect over the lengths `1..=len`.
    pub fn max_up_to(&self, len: usize) -> f64 {
        self.records.iter().take(len).map(|r| r.max_defect).fold(0.0, f64::max)
    }

    pub fn max_defect(&self) -> f64 {
        self.max_up_to(self.records.len())
    }
}

pub fn additivity_defect(rho: &Representation, face: &FaceType, radius: usize) -> Result<DefectTable> {
    additivity_defect_with(rho, face, radius, DEFAULT_BUDGET)
}

pub fn additivity_defect_with(rho: &Representation, face: &FaceType, radius: usize, budget: u64) -> Result<DefectTable> {
    check_face(rho, face)?;
    if radius == 0 {
        return Err(Error::Invalid("ball radius must be at least 1".into()));
    }
    check_budget(rho.rank(), radius, budget)?;
    let half = radius.div_ceil(2);
    let halves: HashMap<Word, CartanVector> = fold_ball(
        rho,
        half,
        Vec::new,
        |acc: &mut Vec<(Word, CartanVector)>, w, g| acc.push((w.clone(), g.cartan())),
        |mut a, b| {
            a.extend(b);
            a
        },
    )
    .into_iter()
    .collect();
    let zero = CartanVector::zero(rho.dim());
    let lookup = |w: &Word| if w.is_empty() { &zero } else { &halves[w] };
    type Acc = Vec<DefectRecord>;
    let init = || {
        (1..=radius)
            .map(|length| DefectRecord { length, max_defect: 0.0, max_gap_defect: 0.0, argmax: Word::empty() })
            .collect::<Acc>()
    };
    let merge_one = |a: &mut DefectRecord, b: &DefectRecord| {
        let wins = b.max_defect > a.max_defect
            || (b.max_defect == a.max_defect && !b.argmax.is_empty() && (a.argmax.is_empty() || b.argmax < a.argmax));
        if wins {
            a.max_defect = b.max_defect;
            a.argmax = b.argmax.clone();
        }
        a.max_gap_defect = a.max_gap_defect.max(b.max_gap_defect);
    };
    let table = fold_ball(
        rho,
        radius,
        init,
        |acc: &mut Acc, w, g| {
            let (w1, w2) = w.split_at(w.len() / 2);
            let (v1, v2) = (lookup(&w1), lookup(&w2));
            let v = g.cartan();
            let defect = v.additivity_defect(v1, v2);
            let gaps = root_gaps(&v, face).expect("face checked");
            let g1 = root_gaps(v1, face).expect("face checked");
            let g2 = root_gaps(v2, face).expect("face checked");
            let gap_defect = gaps.iter().zip(&g1).zip(&g2).fold(0.0, |m: f64, ((x, y), z)| m.max((x - y - z).abs()));
            let rec = DefectRecord { length: w.len(), max_defect: defect, max_gap_defect: gap_defect, argmax: w.clone() };
            merge_one(&mut acc[w.len() - 1], &rec);
        },
        |mut a: Acc, b: Acc| {
            for (x, y) in a.iter_mut().zip(&b) {
                merge_one(x, y);
            }
            a
        },
    );
    Ok(DefectTable { face: face.clone(), records: table })
}
