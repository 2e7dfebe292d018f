//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::collections::HashSet;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use anosov_core::certify::{additivity_defect, certify_uru};
use anosov_core::domain::{domain_sample, in_thickening, properness_witness, Membership, ThickenedLimitSet};
use anosov_core::flag::{act_scaled, contraction_limits, distance, is_antipodal, ContractionOptions, Flag};
use anosov_core::limit::{boundary_map_sample, expansion_series, limit_set_sample, LimitSample};
use anosov_core::linalg::{cartan_projection, Matrix, ScaledElement};
use anosov_core::representation::Representation;
use anosov_core::sampling::{random_unimodular, rng};
use anosov_core::schottky::{
    find_min_powers, genericity_check, schottky_rep, symmetric_square, AxialPair, PowerSearchOptions,
};
use anosov_core::weyl::{bruhat_leq, enumerate_balanced, FaceType, Thickening, WeylElement};
use anosov_core::words::{Letter, Word};
use rand::Rng;

/// Threshold power of the strong pair, confirmed by the interval-image oracle.
const STRONG_THRESHOLD: u64 = 1;
const RADIUS: usize = 10;
const MIN_SLOPE: f64 = 0.05;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn line() -> FaceType {
    FaceType::new(2, vec![1]).unwrap()
}

fn strong_pair() -> AxialPair {
    AxialPair::from_eigenvalues(&[4.0, 0.25], &Matrix::identity(2), FRAC_PI_4).unwrap()
}

fn strong_rep() -> Representation {
    schottky_rep(&strong_pair(), STRONG_THRESHOLD, STRONG_THRESHOLD).unwrap()
}

fn random_ray(len: usize, seed: u64) -> Word {
    let mut r = rng(seed);
    let mut w = Word::empty();
    while w.len() < len {
        let l = Letter::from_index(r.random_range(0..4));
        if w.last() != Some(l.inverse()) {
            w.push(l);
        }
    }
    w
}

fn identity_thickening(d: usize) -> Thickening {
    Thickening::from_elements(d, [&WeylElement::identity(d)]).unwrap()
}

/// Log singular values from symmetric eigenvalues of `gᵀg` and of the
/// inverse's Gram matrix, each index taken from the better-conditioned one.
fn gram_oracle(g: &Matrix) -> Vec<f64> {
    let m = nalgebra::Matrix3::from_row_slice(g.data());
    let inv = m.try_inverse().unwrap();
    let sorted = |a: nalgebra::Matrix3<f64>| {
        let mut e: Vec<f64> = (a.transpose() * a).symmetric_eigen().eigenvalues.iter().cloned().collect();
        e.sort_by(|x, y| y.total_cmp(x));
        e
    };
    let (f, i) = (sorted(m), sorted(inv));
    (0..3)
        .map(|k| if f[0] / f[k] <= i[0] / i[2 - k] { 0.5 * f[k].ln() } else { -0.5 * i[2 - k].ln() })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut r = rng(0x5EED);
    let gs: Vec<Matrix> = (0..1000).map(|_| random_unimodular(3, 1e6, &mut r)).collect();
    let start = Instant::now();
    let vs: Vec<_> = gs.iter().map(|g| cartan_projection(g).unwrap()).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let mut max_sum: f64 = 0.0;
    let mut max_err: f64 = 0.0;
    for (g, v) in gs.iter().zip(&vs) {
        max_sum = max_sum.max(v.sum().abs());
        let o = gram_oracle(g);
        for (a, b) in v.components().iter().zip(&o) {
            max_err = max_err.max((a - b).abs());
        }
    }
    outcome(
        max_sum <= 1e-9 && max_err <= 1e-7 && elapsed < 2.0,
        format!("max |sum| {max_sum:.2e}, max oracle error {max_err:.2e}, {elapsed:.3} s"),
    )
}

fn criterion_2() -> Outcome {
    let g = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let v = cartan_projection(&g).unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let err = (v.components()[0] - 2.0 * phi.ln()).abs().max((v.components()[1] + 2.0 * phi.ln()).abs());
    outcome(err <= 1e-9, format!("({:.9}, {:.9}), error {err:.2e}", v.components()[0], v.components()[1]))
}

/// Products of reduced subwords of a fixed reduced word of `v`.
fn subword_ideal(v: &WeylElement) -> HashSet<WeylElement> {
    let d = v.dim();
    let word = v.reduced_word();
    let mut out = HashSet::new();
    for mask in 0u32..(1 << word.len()) {
        let letters: Vec<usize> = (0..word.len()).filter(|&k| mask >> k & 1 == 1).map(|k| word[k]).collect();
        let u = letters.iter().fold(WeylElement::identity(d), |acc, &i| &acc * &WeylElement::simple(d, i).unwrap());
        if u.length() == letters.len() {
            out.insert(u);
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let all = WeylElement::all(4);
    let mut agree = 0;
    for v in &all {
        let ideal = subword_ideal(v);
        for u in &all {
            if bruhat_leq(u, v).unwrap() == ideal.contains(u) {
                agree += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(agree == 576 && elapsed < 1.0, format!("{agree}/576 pairs agree, {elapsed:.3} s"))
}

/// Balanced ideals by brute force over Bruhat order ideals of size at most
/// `|W|/2`, with the order taken from the subword oracle.
fn balanced_ideals_oracle(d: usize) -> Vec<HashSet<usize>> {
    let all = WeylElement::all(d);
    let n = all.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| all[i].length());
    let below: Vec<u64> = (0..n)
        .map(|i| {
            let ideal = subword_ideal(&all[i]);
            (0..n).filter(|&j| j != i && ideal.contains(&all[j])).fold(0u64, |m, j| m | 1 << j)
        })
        .collect();
    let partner: Vec<usize> = all.iter().map(|w| w.left_by_longest().lex_rank()).collect();
    let mut out = Vec::new();
    fn rec(k: usize, set: u64, order: &[usize], below: &[u64], partner: &[usize], half: u32, out: &mut Vec<HashSet<usize>>) {
        if set.count_ones() > half {
            return;
        }
        if k == order.len() {
            let balanced = (0..order.len()).all(|i| (set >> i & 1) != (set >> partner[i] & 1));
            if balanced {
                out.push((0..order.len()).filter(|&i| set >> i & 1 == 1).collect());
            }
            return;
        }
        let i = order[k];
        rec(k + 1, set, order, below, partner, half, out);
        if below[i] & !set == 0 {
            rec(k + 1, set | 1 << i, order, below, partner, half, out);
        }
    }
    rec(0, 0, &order, &below, &partner, (n / 2) as u32, &mut out);
    out
}

fn as_index_set(t: &Thickening) -> HashSet<usize> {
    t.indices().collect()
}

fn criterion_4() -> Outcome {
    let mut r = rng(0x5EED);
    let mut equiv = 0;
    for _ in 0..10_000 {
        let mask: u32 = r.random_range(0..1 << 24);
        let c = Thickening::from_indices(4, (0..24).filter(|i| mask >> i & 1 == 1)).classify(None).unwrap();
        if c.balanced == (c.fat && c.slim) {
            equiv += 1;
        }
    }
    // d = 3 over all 64 subsets.
    let all3 = WeylElement::all(3);
    let ideals3: Vec<HashSet<WeylElement>> = all3.iter().map(subword_ideal).collect();
    let mut brute3 = Vec::new();
    for mask in 0u32..64 {
        let set: Vec<usize> = (0..6).filter(|i| mask >> i & 1 == 1).collect();
        let closed = set.iter().all(|&i| (0..6).all(|j| !ideals3[i].contains(&all3[j]) || mask >> j & 1 == 1));
        let balanced = (0..6).all(|i| (mask >> i & 1 == 1) != (mask >> all3[i].left_by_longest().lex_rank() & 1 == 1));
        if closed && balanced {
            brute3.push(set);
        }
    }
    let found3 = enumerate_balanced(3, &FaceType::full(3)).unwrap();
    let expect3: HashSet<WeylElement> =
        [WeylElement::identity(3), WeylElement::simple(3, 1).unwrap(), WeylElement::simple(3, 2).unwrap()].into();
    let ok3 = found3.len() == 1
        && found3[0].members().into_iter().collect::<HashSet<_>>() == expect3
        && brute3.len() == 1
        && brute3[0].iter().map(|&i| all3[i].clone()).collect::<HashSet<_>>() == expect3;

    let start = Instant::now();
    let oracle4 = balanced_ideals_oracle(4);
    let oracle_time = start.elapsed().as_secs_f64();
    let found4: Vec<HashSet<usize>> = enumerate_balanced(4, &FaceType::full(4)).unwrap().iter().map(as_index_set).collect();
    let ok4 = found4.len() == oracle4.len() && found4.iter().all(|t| oracle4.contains(t));
    outcome(
        equiv == 10_000 && ok3 && ok4 && oracle_time < 60.0,
        format!(
            "equivalence {equiv}/10000, d=3 {{e,s1,s2}} {ok3}, d=4 {} vs oracle {} ({oracle_time:.2} s)",
            found4.len(),
            oracle4.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let unipotent = Representation::new(&[Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()]).unwrap();
    let u = certify_uru(&unipotent, &line(), 30, MIN_SLOPE).unwrap();
    let cyclic = Representation::new(&[Matrix::diag(&[4.0, 0.25])]).unwrap();
    let c = certify_uru(&cyclic, &line(), 30, MIN_SLOPE).unwrap();
    let rel = (c.c - 2.0 * 4f64.ln()).abs() / (2.0 * 4f64.ln());
    outcome(
        !u.pass && c.pass && rel < 0.05,
        format!("unipotent pass={} c={:.4}; cyclic pass={} c={:.6} (rel. error {rel:.2e})", u.pass, u.c, c.pass, c.c),
    )
}

/// Exact ping-pong check in dimension two: a projective map sends the arc
/// outside `U_{x⁻¹}` to the arc through the image of its midpoint, so the
/// endpoint images decide containment in `U_x`.
fn interval_image_oracle(rho: &Representation, radius_multiplier: f64) -> (bool, f64) {
    let face = line();
    let letters: Vec<Letter> = rho.letters().collect();
    let centers: Vec<Flag> =
        letters.iter().map(|&l| anosov_core::flag::attracting_fixed_flag(rho.letter(l), &face).unwrap()).collect();
    let angle = |f: &Flag| {
        let c = f.frame().column(0);
        c[1].atan2(c[0])
    };
    let mut min_dist = f64::INFINITY;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            min_dist = min_dist.min(distance(&centers[i], &centers[j]).unwrap());
        }
    }
    let r = radius_multiplier * min_dist / 2.0;
    let mut margin = f64::INFINITY;
    for (i, &x) in letters.iter().enumerate() {
        let back = angle(&centers[x.inverse().index()]);
        let arc = std::f64::consts::PI - 2.0 * r;
        let ends = [back + r, back + r + arc / 2.0, back + r + arc];
        let worst = ends
            .iter()
            .map(|&t| {
                let p = Flag::new(face.clone(), &Matrix::rotation(t)).unwrap();
                distance(&act_scaled(rho.letter(x), &p).unwrap(), &centers[i]).unwrap()
            })
            .fold(0.0, f64::max);
        margin = margin.min(r - worst);
    }
    (margin > 0.0, margin)
}

fn criterion_6() -> Outcome {
    let g = genericity_check(&strong_pair(), &line()).unwrap();
    let opts = PowerSearchOptions::default();
    let strong = find_min_powers(&strong_pair(), &line(), RADIUS, MIN_SLOPE, 8, &opts).unwrap();
    let (oracle_pass, oracle_margin) = interval_image_oracle(&strong_rep(), opts.pingpong.multiplier);
    let oracle_threshold = if oracle_pass && strong.uru.pass { 1 } else { 0 };
    let weak_pair = AxialPair::from_eigenvalues(&[1.01, 1.0 / 1.01], &Matrix::identity(2), FRAC_PI_4).unwrap();
    let weak = find_min_powers(&weak_pair, &line(), RADIUS, MIN_SLOPE, 512, &opts).unwrap();
    outcome(
        g.generic && g.margin > 0.5 && strong.power == STRONG_THRESHOLD && oracle_threshold == STRONG_THRESHOLD && weak.power > 1,
        format!(
            "genericity margin {:.4}, strong threshold {} (oracle margin {oracle_margin:.4}), weak threshold {}",
            g.margin, strong.power, weak.power
        ),
    )
}

fn criterion_7() -> Outcome {
    let rho = strong_rep();
    let cert = certify_uru(&rho, &line(), RADIUS, MIN_SLOPE).unwrap();
    let control = Representation::new(&[Matrix::rotation(0.3), Matrix::rotation(1.1)]).unwrap();
    let mut min_slope = f64::INFINITY;
    let mut max_control: f64 = 0.0;
    for seed in 0..20 {
        let ray = random_ray(24, seed);
        min_slope = min_slope.min(expansion_series(&rho, &line(), &ray, 12).unwrap().slope);
        max_control = max_control.max(expansion_series(&control, &line(), &ray, 12).unwrap().slope.abs());
    }
    outcome(
        cert.pass && min_slope >= 0.1 && max_control < 1e-6,
        format!("certified={}, min slope over 20 rays {min_slope:.4}, control |slope| {max_control:.2e}", cert.pass),
    )
}

fn criterion_8() -> Outcome {
    let e = ScaledElement::from_matrix(&Matrix::diag(&[4.0, 2.0, 0.125])).unwrap();
    let gs: Vec<_> = (1..=20).map(|n| e.pow(n)).collect();
    let c = contraction_limits(&gs, &FaceType::full(3), &ContractionOptions::default()).unwrap();
    outcome(
        c.decay[19] < 1e-3 && c.monotone && c.samples.len() == 100,
        format!("sup distance at n=20 {:.3e}, non-increasing {}", c.decay[19], c.monotone),
    )
}

fn criterion_9() -> Outcome {
    let p = strong_pair();
    let q = AxialPair::new(symmetric_square(&p.alpha).unwrap(), symmetric_square(&p.beta).unwrap()).unwrap();
    let rho = schottky_rep(&q, 1, 1).unwrap();
    let full = FaceType::full(3);
    let cert = certify_uru(&rho, &full, RADIUS, MIN_SLOPE).unwrap();
    let table = additivity_defect(&rho, &full, 10).unwrap();
    let (d8, d10) = (table.max_up_to(8), table.max_defect());
    let growth = (d10 - d8) / d8;
    let control = Representation::new(&[Matrix::diag(&[16.0, 1.0, 1.0 / 16.0])]).unwrap();
    let zero = additivity_defect(&control, &full, 10).unwrap().max_defect();
    outcome(
        cert.pass && growth < 0.1 && zero <= 1e-12,
        format!("certified={}, defect L=8 {d8:.6}, L=10 {d10:.6} (growth {:.2}%), control {zero:.1e}", cert.pass, 100.0 * growth),
    )
}

fn criterion_10_equivariance() -> Outcome {
    let rho = strong_rep();
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let ray = random_ray(24, seed);
        let base = boundary_map_sample(&rho, &line(), &ray, ray.len()).unwrap();
        for l in Letter::all(2) {
            let moved = Word::from_letters(vec![l]).concat(&ray);
            let image = boundary_map_sample(&rho, &line(), &moved, moved.len()).unwrap();
            let pushed = act_scaled(rho.letter(l), base.limit()).unwrap();
            worst = worst.max(distance(image.limit(), &pushed).unwrap());
        }
    }
    outcome(worst < 1e-5, format!("max equivariance error {worst:.2e} over 20 rays x 4 letters"))
}

fn criterion_10_antipodality() -> Outcome {
    let rho = strong_rep();
    let cert = certify_uru(&rho, &line(), RADIUS, MIN_SLOPE).unwrap();
    let mut sample = limit_set_sample(&rho, &line(), 6, 16).unwrap().with_certificate(&cert);
    sample.points.truncate(500);
    let n = sample.points.len();
    let mut margin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            margin = margin.min(is_antipodal(&sample.points[i].flag, &sample.points[j].flag).unwrap().margin);
        }
    }
    outcome(
        sample.certified && n == 500 && margin > 1e-3,
        format!("{n} certified limit flags, min pairwise antipodality margin {margin:.3e} (required > 1e-3)"),
    )
}

fn criterion_11() -> Outcome {
    // Rank one: Th = {e} against the Schottky limit sample.
    let sample = limit_set_sample(&strong_rep(), &line(), 6, 16).unwrap();
    let t2 = ThickenedLimitSet::new(identity_thickening(2), sample).unwrap();
    let cloud = domain_sample(&t2, 2000, 0x5EED).unwrap();
    let far: Vec<_> = cloud.points.iter().filter(|p| p.margin > 0.05).collect();
    let far_out = far.iter().all(|p| p.class == Membership::Out);

    // d = 3: permutation chambers against the standard chamber.
    let full = FaceType::full(3);
    let std_sample = LimitSample::from_flags(full.clone(), vec![Flag::standard(full.clone())]).unwrap();
    let balanced = enumerate_balanced(3, &full).unwrap().remove(0);
    let t3 = ThickenedLimitSet::new(balanced.clone(), std_sample).unwrap();
    let cells = WeylElement::all(3).iter().all(|w| {
        let sigma = Flag::from_permutation(full.clone(), w).unwrap();
        let is_in = matches!(in_thickening(&sigma, &t3).unwrap(), Membership::In { .. });
        is_in == balanced.contains(w)
    });

    // Properness census for the cyclic group.
    let cyclic = Representation::new(&[Matrix::diag(&[4.0, 0.25])]).unwrap();
    let point = |t: f64| Flag::new(line(), &Matrix::rotation(t)).unwrap();
    let fixed = LimitSample::from_flags(line(), vec![point(0.0), point(FRAC_PI_2)]).unwrap();
    let tc = ThickenedLimitSet::new(identity_thickening(2), fixed).unwrap();
    let k: Vec<Flag> = (0..11).map(|i| point(0.6 + 0.04 * i as f64)).collect();
    let census = properness_witness(&cyclic, &tc, &k, 12, 0.05).unwrap();
    let only_zero = census.last_return() == Some(0);

    outcome(
        far_out && !far.is_empty() && cells && only_zero,
        format!(
            "rank one: {}/{} far chambers out; d=3 cells {cells}; census {:?}",
            far.iter().filter(|p| p.class == Membership::Out).count(),
            far.len(),
            census.counts
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 cartan kernel", criterion_1),
        ("2 golden ratio", criterion_2),
        ("3 bruhat oracle", criterion_3),
        ("4 thickening calculus", criterion_4),
        ("5 regularity dichotomy", criterion_5),
        ("6 schottky pipeline", criterion_6),
        ("7 expansion signature", criterion_7),
        ("8 contraction dynamics", criterion_8),
        ("9 additivity defect", criterion_9),
        ("10a boundary equivariance", criterion_10_equivariance),
        ("10b limit-set antipodality", criterion_10_antipodality),
        ("11 domain classification", criterion_11),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            outcome(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("criterion {name}: {verdict} [{:.2} s] {}", start.elapsed().as_secs_f64(), result.detail);
        if !result.pass {
            failed += 1;
        }
    }
    println!("acceptance: {failed} failing criteria");
    if failed > 0 {
        std::process::exit(1);
    }
}
