//! Thickenings of sampled limit sets in the chamber manifold, the
//! complementary domains, and finite-return evidence for properness.

use rayon::prelude::*;

use crate::certify::fold_ball;
use crate::error::{Error, Result};
use crate::flag::{act_scaled, distance, random_flag, relative_position_with, Chamber, Flag};
use crate::limit::LimitSample;
use crate::linalg::Tolerances;
use crate::representation::Representation;
use crate::sampling;
use crate::weyl::{FaceType, Thickening, WeylElement};
use crate::words::Word;

/// `Th(Λ)`: chambers whose position relative to some sampled limit flag
/// lies in the thickening.
#[derive(Clone, Debug)]
pub struct ThickenedLimitSet {
    pub thickening: Thickening,
    pub sample: LimitSample,
    /// Rank tolerance used when reading off relative positions.
    pub tolerance: Tolerances,
}

impl ThickenedLimitSet {
    pub fn new(thickening: Thickening, sample: LimitSample) -> Result<Self> {
        Self::with_tolerance(thickening, sample, Tolerances::default())
    }

    pub fn with_tolerance(thickening: Thickening, sample: LimitSample, tolerance: Tolerances) -> Result<Self> {
        tolerance.validate()?;
        let face = &sample.face;
        if thickening.dim() != face.dim() {
            return Err(Error::DimMismatch { expected: face.dim(), found: thickening.dim() });
        }
        if !thickening.is_downward_closed() {
            return Err(Error::Invalid(format!("thickening {thickening} is not downward closed")));
        }
        if !thickening.is_stabilizer_invariant(face)? {
            return Err(Error::Invalid(format!("thickening {thickening} is not invariant under the stabilizer of {face}")));
        }
        Ok(Self { thickening, sample, tolerance })
    }

    pub fn dim(&self) -> usize {
        self.thickening.dim()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// Position `coset` relative to sample point `index` lies in the thickening.
    In { index: usize, word: Word, coset: WeylElement },
    Out,
    /// Some position is rank-degenerate and no sample point gave `In`.
    Ambiguous,
}

impl Membership {
    pub fn label(&self) -> &'static str {
        match self {
            Membership::In { .. } => "in",
            Membership::Out => "out",
            Membership::Ambiguous => "ambiguous",
        }
    }
}

pub fn in_thickening(sigma: &Chamber, t: &ThickenedLimitSet) -> Result<Membership> {
    if sigma.dim() != t.dim() {
        return Err(Error::DimMismatch { expected: t.dim(), found: sigma.dim() });
    }
    if !sigma.face().is_full() {
        return Err(Error::BadFace(format!("expected a chamber, got type {}", sigma.face())));
    }
    let mut ambiguous = false;
    for (index, p) in t.sample.points.iter().enumerate() {
        match relative_position_with(sigma, &p.flag, &t.tolerance) {
            Ok(coset) if t.thickening.contains(&coset) => {
                return Ok(Membership::In { index, word: p.word.clone(), coset });
            }
            Ok(_) => {}
            Err(Error::DegeneratePosition { .. }) => ambiguous = true,
            Err(e) => return Err(e),
        }
    }
    Ok(if ambiguous { Membership::Ambiguous } else { Membership::Out })
}

#[derive(Clone, Debug)]
pub struct ClassifiedChamber {
    pub chamber: Chamber,
    pub class: Membership,
    /// Distance to the nearest sampled limit flag (as flags of its type).
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct DomainSample {
    pub points: Vec<ClassifiedChamber>,
    pub seed: u64,
}

impl DomainSample {
    /// `(in, out, ambiguous)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        self.points.iter().fold((0, 0, 0), |(i, o, a), p| match p.class {
            Membership::In { .. } => (i + 1, o, a),
            Membership::Out => (i, o + 1, a),
            Membership::Ambiguous => (i, o, a + 1),
        })
    }

    /// The chambers classified `out`.
    pub fn domain(&self) -> Vec<Chamber> {
        self.points.iter().filter(|p| p.class == Membership::Out).map(|p| p.chamber.clone()).collect()
    }
}

fn nearest_sample_distance(sigma: &Chamber, t: &ThickenedLimitSet) -> Result<f64> {
    if t.sample.is_empty() {
        return Ok(f64::INFINITY);
    }
    let projected = sigma.with_face(t.sample.face.clone())?;
    t.sample.points.iter().try_fold(f64::INFINITY, |m, p| Ok(m.min(distance(&projected, &p.flag)?)))
}

/// Classifies chambers against `t`.
pub fn classify_chambers(chambers: Vec<Chamber>, t: &ThickenedLimitSet) -> Result<Vec<ClassifiedChamber>> {
    chambers
        .into_par_iter()
        .map(|chamber| {
            let class = in_thickening(&chamber, t)?;
            let margin = nearest_sample_distance(&chamber, t)?;
            Ok(ClassifiedChamber { chamber, class, margin })
        })
        .collect()
}

/// `n` seeded uniform random chambers, classified.
pub fn domain_sample(t: &ThickenedLimitSet, n: usize, seed: u64) -> Result<DomainSample> {
    let face = FaceType::full(t.dim());
    let mut rng = sampling::rng(seed);
    let chambers: Vec<Chamber> = (0..n).map(|_| random_flag(&face, &mut rng)).collect();
    Ok(DomainSample { points: classify_chambers(chambers, t)?, seed })
}

#[derive(Clone, Debug)]
pub struct ReturnCensus {
    /// Number of returning words of each length `0..=max_len`.
    pub counts: Vec<u64>,
    /// Returning words in shortlex order (the identity included).
    pub returns: Vec<Word>,
    pub max_len: usize,
    /// Distance below which an image counts as meeting the sample.
    pub tolerance: f64,
}

impl ReturnCensus {
    /// Longest length with a return.
    pub fn last_return(&self) -> Option<usize> {
        self.counts.iter().rposition(|&c| c > 0)
    }

    /// Whether the census is free of returns at the largest lengths, i.e.
    /// nothing new appeared after `last_return`.
    pub fn stabilized(&self) -> bool {
        self.last_return().is_none_or(|l| l < self.max_len)
    }
}

fn meets(images: &[Flag], k: &[Flag], tolerance: f64) -> Result<bool> {
    // The flag distance is at least the angle between the first lines.
    let cos_bound = tolerance.min(std::f64::consts::FRAC_PI_2).cos();
    let first = |f: &Flag| f.frame().column(0);
    let k_lines: Vec<Vec<f64>> = k.iter().map(first).collect();
    for a in images {
        let la = first(a);
        for (b, lb) in k.iter().zip(&k_lines) {
            let cos: f64 = la.iter().zip(lb).map(|(x, y)| x * y).sum::<f64>().abs();
            if cos < cos_bound {
                continue;
            }
            if distance(a, b)? < tolerance {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Reduced words `w`, `|w| <= max_len`, with `ρ(w)·K` within `tolerance`
/// of `K`. Every chamber of `K` must lie in the domain of `t`.
pub fn properness_witness(
    rho: &Representation,
    t: &ThickenedLimitSet,
    k: &[Chamber],
    max_len: usize,
    tolerance: f64,
) -> Result<ReturnCensus> {
    if rho.dim() != t.dim() {
        return Err(Error::DimMismatch { expected: t.dim(), found: rho.dim() });
    }
    for sigma in k {
        let m = in_thickening(sigma, t)?;
        if m != Membership::Out {
            return Err(Error::Invalid(format!("compact sample meets the thickening ({})", m.label())));
        }
    }
    let mut counts = vec![0u64; max_len + 1];
    let mut returns = Vec::new();
    if !k.is_empty() {
        counts[0] = 1;
        returns.push(Word::empty());
    }
    let found: Result<Vec<Word>> = fold_ball(
        rho,
        max_len,
        || Ok(Vec::new()),
        |acc: &mut Result<Vec<Word>>, w, g| {
            let Ok(list) = acc else { return };
            let step = k.iter().map(|s| act_scaled(g, s)).collect::<Result<Vec<_>>>().and_then(|im| meets(&im, k, tolerance));
            match step {
                Ok(true) => list.push(w.clone()),
                Ok(false) => {}
                Err(e) => *acc = Err(e),
            }
        },
        |a, b| {
            let (mut a, b) = (a?, b?);
            a.extend(b);
            Ok(a)
        },
    );
    let mut found = found?;
    found.sort();
    for w in &found {
        counts[w.len()] += 1;
    }
    returns.extend(found);
    Ok(ReturnCensus { counts, returns, max_len, tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::weyl::enumerate_balanced;
    use std::f64::consts::FRAC_PI_2;

    fn line() -> FaceType {
        FaceType::new(2, vec![1]).unwrap()
    }

    fn point(theta: f64) -> Flag {
        Flag::new(line(), &Matrix::rotation(theta)).unwrap()
    }

    fn identity_thickening(d: usize) -> Thickening {
        Thickening::from_elements(d, [&WeylElement::identity(d)]).unwrap()
    }

    fn cyclic() -> Representation {
        Representation::new(&[Matrix::diag(&[4.0, 0.25])]).unwrap()
    }

    fn balanced3() -> Thickening {
        let all = enumerate_balanced(3, &FaceType::full(3)).unwrap();
        assert_eq!(all.len(), 1);
        all[0].clone()
    }

    #[test]
    fn rank_one_thickening_is_the_sample() {
        let sample = LimitSample::from_flags(line(), vec![point(0.0), point(1.0)]).unwrap();
        let t = ThickenedLimitSet::new(identity_thickening(2), sample).unwrap();
        assert!(matches!(in_thickening(&point(1.0), &t).unwrap(), Membership::In { index: 1, .. }));
        assert_eq!(in_thickening(&point(0.5), &t).unwrap(), Membership::Out);
        assert_eq!(in_thickening(&point(1.0 + 1e-3), &t).unwrap(), Membership::Out);
    }

    #[test]
    fn tolerance_ball_variant() {
        let sample = LimitSample::from_flags(line(), vec![point(0.0)]).unwrap();
        let tol = Tolerances { rank_tol: 0.05, ..Tolerances::default() };
        let t = ThickenedLimitSet::with_tolerance(identity_thickening(2), sample, tol).unwrap();
        // Smallest singular value of two unit lines at angle θ is √(1 - cos θ).
        let inside = (1.0 - 0.04f64 * 0.04).acos() * 0.5;
        assert!(matches!(in_thickening(&point(inside), &t).unwrap(), Membership::In { .. }));
        assert_eq!(in_thickening(&point(0.5), &t).unwrap(), Membership::Out);
        let edge = (1.0 - 0.08f64 * 0.08).acos();
        assert_eq!(in_thickening(&point(edge), &t).unwrap(), Membership::Ambiguous);
    }

    #[test]
    fn validation() {
        let sample = LimitSample::from_flags(FaceType::full(3), vec![Flag::standard(FaceType::full(3))]).unwrap();
        let s1 = WeylElement::simple(3, 1).unwrap();
        let not_closed = Thickening::from_elements(3, [&s1]).unwrap();
        assert!(ThickenedLimitSet::new(not_closed, sample.clone()).is_err());
        let sample2 = LimitSample::from_flags(FaceType::full(2), vec![Flag::standard(FaceType::full(2))]).unwrap();
        assert!(matches!(ThickenedLimitSet::new(balanced3(), sample2), Err(Error::DimMismatch { .. })));
        assert!(ThickenedLimitSet::new(balanced3(), sample).is_ok());
    }

    #[test]
    fn permutation_chambers_classify_by_cell() {
        let face = FaceType::full(3);
        let sample = LimitSample::from_flags(face.clone(), vec![Flag::standard(face.clone())]).unwrap();
        let th = balanced3();
        let t = ThickenedLimitSet::new(th.clone(), sample).unwrap();
        for w in WeylElement::all(3) {
            let sigma = Flag::from_permutation(face.clone(), &w).unwrap();
            let is_in = matches!(in_thickening(&sigma, &t).unwrap(), Membership::In { .. });
            assert_eq!(is_in, w.length() <= 1, "{w}");
            assert_eq!(is_in, th.contains(&w));
        }
    }

    #[test]
    fn antipodal_chambers_are_out() {
        let face = FaceType::full(3);
        let mut r = sampling::rng(9);
        let flags: Vec<Flag> = (0..5).map(|_| random_flag(&face, &mut r)).collect();
        let sample = LimitSample::from_flags(face.clone(), flags.clone()).unwrap();
        let t = ThickenedLimitSet::new(balanced3(), sample).unwrap();
        for f in &flags {
            assert!(matches!(in_thickening(f, &t).unwrap(), Membership::In { .. }));
        }
        let sigma = random_flag(&face, &mut r);
        assert_eq!(in_thickening(&sigma, &t).unwrap(), Membership::Out);
    }

    #[test]
    fn fat_thickenings_cover_one_of_each_pair() {
        let face = FaceType::full(3);
        let th = balanced3();
        for tau_w in WeylElement::all(3) {
            let tau = Flag::from_permutation(face.clone(), &tau_w).unwrap();
            let sample = LimitSample::from_flags(face.clone(), vec![tau]).unwrap();
            let t = ThickenedLimitSet::new(th.clone(), sample).unwrap();
            for w in WeylElement::all(3) {
                let sigma = Flag::from_permutation(face.clone(), &w).unwrap();
                let in_direct = matches!(in_thickening(&sigma, &t).unwrap(), Membership::In { .. });
                let pos = relative_position_with(&sigma, &t.sample.points[0].flag, &t.tolerance).unwrap();
                let in_opposite = th.contains(&pos.left_by_longest());
                assert!(in_direct != in_opposite, "{w} vs {tau_w}");
            }
        }
    }

    #[test]
    fn empty_sample_leaves_everything_out() {
        let sample = LimitSample::from_flags(FaceType::full(3), vec![]).unwrap();
        let t = ThickenedLimitSet::new(balanced3(), sample).unwrap();
        let s = domain_sample(&t, 50, 1).unwrap();
        assert_eq!(s.counts(), (0, 50, 0));
        assert!(s.points.iter().all(|p| p.margin.is_infinite()));
    }

    #[test]
    fn domain_sample_is_reproducible() {
        let sample = LimitSample::from_flags(line(), vec![point(0.0), point(FRAC_PI_2)]).unwrap();
        let t = ThickenedLimitSet::new(identity_thickening(2), sample).unwrap();
        let a = domain_sample(&t, 200, 5).unwrap();
        let b = domain_sample(&t, 200, 5).unwrap();
        assert_eq!(a.counts(), (0, 200, 0));
        for (x, y) in a.points.iter().zip(&b.points) {
            assert_eq!(x.chamber.frame().data(), y.chamber.frame().data());
            assert_eq!(x.margin, y.margin);
        }
    }

    fn cyclic_domain() -> ThickenedLimitSet {
        let sample = LimitSample::from_flags(line(), vec![point(0.0), point(FRAC_PI_2)]).unwrap();
        ThickenedLimitSet::new(identity_thickening(2), sample).unwrap()
    }

    #[test]
    fn cyclic_returns_only_at_length_zero() {
        let k: Vec<Flag> = (0..11).map(|i| point(0.6 + 0.04 * i as f64)).collect();
        let c = properness_witness(&cyclic(), &cyclic_domain(), &k, 12, 0.05).unwrap();
        assert_eq!(c.counts[0], 1);
        assert!(c.counts[1..].iter().all(|&x| x == 0), "{:?}", c.counts);
        assert_eq!(c.last_return(), Some(0));
        assert!(c.stabilized());
    }

    #[test]
    fn compact_near_a_limit_point_returns_at_every_length() {
        // Empty thickening sample so K may touch the fixed point.
        let t = ThickenedLimitSet::new(identity_thickening(2), LimitSample::from_flags(line(), vec![]).unwrap()).unwrap();
        let k = vec![point(0.0), point(0.3)];
        let c = properness_witness(&cyclic(), &t, &k, 8, 0.05).unwrap();
        assert!(c.counts.iter().all(|&x| x > 0));
        assert!(!c.stabilized());
    }

    #[test]
    fn trivial_representation_returns_everywhere() {
        let rho = Representation::new(&[Matrix::identity(2), Matrix::identity(2)]).unwrap();
        let t = ThickenedLimitSet::new(identity_thickening(2), LimitSample::from_flags(line(), vec![]).unwrap()).unwrap();
        let c = properness_witness(&rho, &t, &[point(0.3)], 4, 1e-9).unwrap();
        assert_eq!(c.counts, vec![1, 4, 12, 36, 108]);
        assert_eq!(c.returns.len(), 161);
    }

    #[test]
    fn compact_must_avoid_the_thickening() {
        let k = vec![point(0.0)];
        assert!(matches!(properness_witness(&cyclic(), &cyclic_domain(), &k, 3, 0.05), Err(Error::Invalid(_))));
    }
}
