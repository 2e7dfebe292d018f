use anosov_core::linalg::{cartan_projection, kak, Matrix, Tolerances};
use anosov_core::sampling::{random_orthogonal, random_unimodular, rng};
use proptest::prelude::*;

fn unimodular(d: usize, cond: f64, seed: u64) -> Matrix {
    random_unimodular(d, cond, &mut rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn components_sorted_and_trace_free(d in 2usize..6, seed in any::<u64>()) {
        let v = cartan_projection(&unimodular(d, 1e6, seed)).unwrap();
        let c = v.components();
        prop_assert!(c.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(v.sum().abs() <= Tolerances::default().sum_tol);
    }

    #[test]
    fn bi_invariance(d in 2usize..6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_unimodular(d, 1e3, &mut r);
        let k1 = random_orthogonal(d, &mut r);
        let k2 = random_orthogonal(d, &mut r);
        let a = cartan_projection(&g).unwrap();
        let b = cartan_projection(&(&(&k1 * &g) * &k2)).unwrap();
        prop_assert!(a.sup_distance(&b) <= Tolerances::default().svd_tol, "{:?} vs {:?}", a, b);
    }

    #[test]
    fn inversion_symmetry(d in 2usize..6, seed in any::<u64>()) {
        let g = unimodular(d, 1e3, seed);
        let a = cartan_projection(&g).unwrap();
        let b = cartan_projection(&g.inverse().unwrap()).unwrap();
        prop_assert!(a.opposite().sup_distance(&b) <= Tolerances::default().svd_tol);
    }
}

#[test]
fn kak_recomposes_on_a_thousand_matrices() {
    let tol = Tolerances::default().recompose_tol;
    let mut r = rng(0x5EED);
    for i in 0..1000 {
        let d = 2 + i % 4;
        let g = random_unimodular(d, 1e8, &mut r);
        let k = kak(&g).unwrap();
        assert!(k.recompose().max_abs_diff(&g) < tol, "matrix {i}");
        assert!(k.k1.orthogonality_defect() < 1e-12 && k.k2.orthogonality_defect() < 1e-12);
    }
}
