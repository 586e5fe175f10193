use std::sync::Arc;

use morita_gp::algebra::*;
use morita_gp::fixtures::{self, from_table};
use morita_gp::gen;
use morita_gp::linalg::{Field, Mat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f2() -> Field {
    Field::fp(2).unwrap()
}

fn f3() -> Field {
    Field::fp(3).unwrap()
}

/// All vectors of `F_p^n` as column matrices.
fn all_vectors(f: Field, n: usize) -> Vec<Mat> {
    let p = f.order().unwrap() as i64;
    let total = p.pow(n as u32);
    (0..total)
        .map(|mut c| {
            let v: Vec<i64> = (0..n)
                .map(|_| {
                    let d = c % p;
                    c /= p;
                    d
                })
                .collect();
            Mat::from_i64(f, n, 1, &v)
        })
        .collect()
}

fn is_nilpotent(m: &Mat) -> bool {
    m.pow(m.rows() as u32).is_zero()
}

/// Radical over a small prime field by brute force: `x` with `xy`
/// nilpotent for every `y`.
fn brute_radical_dim(a: &Algebra) -> usize {
    let vs = all_vectors(a.field(), a.dim());
    let members: Vec<Mat> = vs
        .iter()
        .filter(|x| vs.iter().all(|y| is_nilpotent(&a.left_mult(&a.mul(x, y)))))
        .cloned()
        .collect();
    Mat::from_cols(a.field(), a.dim(), &members).rank()
}

#[test]
fn validate_examples() {
    let q = Field::Q;
    assert!(validate_algebra(&Algebra::ground(q)).is_ok());
    assert!(validate_algebra(&fixtures::dual_numbers(q)).is_ok());
    // b0 b0 = b1, b1 b0 = b0: (b0 b0) b0 = b0 but b0 (b0 b0) = 0
    let bad = from_table_unchecked(q, 2, &[0, 0], &[(0, 0, 1, 1), (1, 0, 0, 1)]);
    assert_eq!(validate_algebra(&bad), Err(Violation::Associativity { i: 0, j: 0, k: 0 }));
}

fn from_table_unchecked(f: Field, dim: usize, unit: &[i64], t: &[(usize, usize, usize, i64)]) -> Algebra {
    let mut left = vec![Mat::zero(f, dim, dim); dim];
    for &(i, j, k, c) in t {
        left[i].set(k, j, &f.from_i64(c));
    }
    Algebra::from_left_unchecked(f, left, Mat::from_i64(f, dim, 1, unit))
}

#[test]
fn opposite_of_path_algebra_matches_hand_table() {
    let q = Field::Q;
    let op = opposite_algebra(&fixtures::path_a2(q));
    // in the opposite, a * e1 = e1 a = a and e2 * a = a e2 = a
    let hand = from_table(q, 3, &[1, 1, 0], &[(0, 0, 0, 1), (1, 1, 1, 1), (2, 0, 2, 1), (1, 2, 2, 1)]);
    assert_eq!(op, hand);
    assert!(validate_algebra(&op).is_ok());
    let comm = fixtures::truncated_poly(q, 3);
    assert_eq!(comm.opposite(), *comm);
}

#[test]
fn hom_space_examples() {
    let q = Field::Q;
    let k = fixtures::ground(q);
    assert_eq!(hom_space(&FDModule::regular(&k), &FDModule::regular(&k)).unwrap().dim(), 1);
    let kk = fixtures::k_times_k(q);
    let s = simple_modules(&kk).unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(hom_space(&s[0], &s[1]).unwrap().dim(), 0);
    assert!(is_isomorphic(&s[0], &s[1]).unwrap().is_none());
}

#[test]
fn endomorphisms_of_dual_numbers_match_enumeration() {
    let f = f3();
    let a = fixtures::dual_numbers(f);
    let reg = FDModule::regular(&a);
    // every 2x2 matrix over F_3 commuting with the action of x
    let count = all_vectors(f, 4)
        .into_iter()
        .filter(|v| {
            let m = v.reshape(2, 2);
            reg.action(1).matmul(&m) == m.matmul(reg.action(1))
        })
        .count();
    assert_eq!(count, 9);
    assert_eq!(hom_space(&reg, &reg).unwrap().dim(), 2);
}

#[test]
fn isomorphism_examples() {
    let q = Field::Q;
    let a = fixtures::path_a2(q);
    let p = FDModule::regular(&a);
    let id = is_isomorphic(&p, &p).unwrap().unwrap();
    assert!(id.mat.is_identity());
    let s = simple_modules(&a).unwrap();
    assert!(is_isomorphic(&p, &s[0]).unwrap().is_none());
    // a basis change of the regular module is found again
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = gen::random_invertible(&mut rng, q, 3);
    let (p2, _) = p.transport(&t).unwrap();
    let iso = is_isomorphic(&p, &p2).unwrap().unwrap();
    assert!(iso.is_iso() && iso.intertwines());
}

#[test]
fn decomposition_and_sums() {
    let q = Field::Q;
    let a = fixtures::path_a2(q);
    let idem = a.idempotents().unwrap();
    let big = idem.proj_basis.iter().position(|b| b.cols() == 2).unwrap();
    let p2 = indecomposable_projective(&a, big).unwrap();
    let p1 = indecomposable_projective(&a, 1 - big).unwrap();
    let s = simple_modules(&a).unwrap();
    let s2 = &s[big];
    let x = p2.direct_sum(&p1);
    let y = s2.direct_sum(&p1).direct_sum(&p1);
    assert_eq!(x.dim(), y.dim());
    assert!(is_isomorphic(&x, &y).unwrap().is_none());
    assert_eq!(decompose(&x).unwrap().len(), 2);
    assert_eq!(decompose(&p2.direct_sum(&p2).direct_sum(s2)).unwrap().len(), 3);
    let (xx, _) = x.transport(&gen::random_invertible(&mut ChaCha8Rng::seed_from_u64(9), q, 3)).unwrap();
    assert!(is_isomorphic(&x, &xx).unwrap().is_some());
}

#[test]
fn kernel_cokernel_examples() {
    let q = Field::Q;
    let a = fixtures::dual_numbers(q);
    let reg = FDModule::regular(&a);
    let id = ModuleHom::identity(&reg);
    assert_eq!(kernel_of(&id).0.dim(), 0);
    let z = ModuleHom::zero(&reg, &reg);
    assert_eq!(kernel_of(&z).0.dim(), 2);
    // right multiplication by x is a module map A -> A
    let mx = ModuleHom::new(reg.clone(), reg.clone(), a.right(1).clone()).unwrap();
    let (c, p) = cokernel_of(&mx);
    assert_eq!(c.dim(), 1);
    assert_eq!(mx.mat.rank(), 1);
    assert!(p.is_surjective());
}

#[test]
fn radical_examples() {
    let q = Field::Q;
    assert_eq!(jacobson_radical(&fixtures::k_times_k(q)).unwrap().cols(), 0);
    let r = jacobson_radical(&fixtures::dual_numbers(q)).unwrap();
    assert_eq!(r, Mat::from_i64(q, 2, 1, &[0, 1]));
    let pa = fixtures::path_a2(q);
    let r = jacobson_radical(&pa).unwrap();
    assert_eq!(r, Mat::from_i64(q, 3, 1, &[0, 0, 1]));
    assert!(pa.product_span(&r, &r).cols() == 0);
}

#[test]
fn radical_small_characteristic_matches_brute_force() {
    let cases: Vec<Arc<Algebra>> = vec![
        fixtures::abelian_group_algebra(f2(), &[2]),
        fixtures::abelian_group_algebra(f2(), &[2, 2]),
        fixtures::abelian_group_algebra(f2(), &[4]),
        fixtures::abelian_group_algebra(f3(), &[3]),
        fixtures::matrix_algebra(f2(), 2),
        fixtures::upper_triangular(f2(), 3),
        fixtures::truncated_poly(f2(), 3),
        fixtures::k_times_k(f2()),
    ];
    for a in cases {
        let r = jacobson_radical(&a).unwrap();
        assert_eq!(r.cols(), brute_radical_dim(&a), "dim {}", a.dim());
        let (quot, _) = semisimple_quotient(&a).unwrap();
        assert_eq!(jacobson_radical(&quot).unwrap().cols(), 0);
    }
}

#[test]
fn idempotents_of_matrix_algebra_in_twisted_basis() {
    for f in [Field::Q, f3()] {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = fixtures::matrix_algebra(f, 2);
        let t = Arc::new(m.change_basis(&gen::random_invertible(&mut rng, f, 4)).unwrap());
        let idem = t.idempotents().unwrap();
        assert_eq!(idem.elems.len(), 2);
        assert_eq!(idem.n_classes(), 1);
    }
}

#[test]
fn projective_cover_examples() {
    let q = Field::Q;
    let a = fixtures::dual_numbers(q);
    let reg = FDModule::regular(&a);
    let c = projective_cover(&reg).unwrap();
    assert_eq!(c.module.dim(), 2);
    assert!(c.map.is_iso());
    let s = fixtures::trivial_module(&a);
    let c = projective_cover(&s).unwrap();
    assert_eq!(c.module.dim(), 2);
    assert_eq!(c.map.kernel().0.dim(), 1);
    let z = FDModule::zero(&a);
    assert_eq!(projective_cover(&z).unwrap().module.dim(), 0);
}

#[test]
fn resolution_examples() {
    let q = Field::Q;
    let a = fixtures::dual_numbers(q);
    let s = fixtures::trivial_module(&a);
    let r = projective_resolution(&s, 3).unwrap();
    assert_eq!(r.complex.dims(), vec![2, 2, 2, 2]);
    assert!(r.complex.is_exact_interior());
    let pa = fixtures::path_a2(q);
    let simples = simple_modules(&pa).unwrap();
    let s2 = simples.iter().find(|s| !is_projective(s).unwrap()).unwrap();
    let r = projective_resolution(s2, 5).unwrap();
    assert_eq!(r.complex.dims(), vec![1, 2]);
    assert!(r.is_finite());
    let p = FDModule::regular(&pa);
    assert_eq!(projective_resolution(&p, 4).unwrap().length(), 0);
}

#[test]
fn ext_and_tor_examples() {
    let q = Field::Q;
    let a = fixtures::dual_numbers(q);
    let s = fixtures::trivial_module(&a);
    let reg = FDModule::regular(&a);
    assert_eq!(ext_group(&reg, &s, 1).unwrap(), 0);
    assert_eq!(ext_group(&s, &s, 0).unwrap(), 1);
    assert_eq!(ext_group(&s, &s, 1).unwrap(), 1);
    assert_eq!(ext_group(&s, &s, 2).unwrap(), 1);
    let op = a.opposite_arc();
    let sr = s.dual(&op);
    assert_eq!(tor_group(&sr, &s, 0).unwrap(), 1);
    assert_eq!(tor_group(&sr, &s, 1).unwrap(), 1);
    assert_eq!(tor_group(&sr, &reg, 1).unwrap(), 0);
}

#[test]
fn dimension_examples() {
    let q = Field::Q;
    let k = fixtures::ground(q);
    assert_eq!(global_dimension(&k, 5).unwrap(), Some(0));
    assert!(is_self_injective(&k).unwrap());
    let pa = fixtures::path_a2(q);
    assert_eq!(global_dimension(&pa, 5).unwrap(), Some(1));
    assert!(!is_self_injective(&pa).unwrap());
    for s in simple_modules(&pa).unwrap() {
        assert!(injective_dimension(&s, 5).unwrap().unwrap() <= 1);
    }
    let d = fixtures::dual_numbers(q);
    assert_eq!(global_dimension(&d, 6).unwrap(), None);
    assert!(is_self_injective(&d).unwrap());
    assert_eq!(injective_dimension(&fixtures::trivial_module(&d), 6).unwrap(), None);
    let op = d.opposite_arc();
    assert_eq!(injective_dimension(&FDModule::regular(&op).dual(&d), 3).unwrap(), Some(0));
}

fn field_for(i: usize) -> Field {
    [Field::fp(2).unwrap(), Field::fp(5).unwrap(), Field::Q][i]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn opposite_is_an_involution(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_algebra(&mut rng, field_for(fi), 4, true);
        prop_assert!(a.validate().is_ok());
        prop_assert_eq!(a.opposite().opposite(), (*a).clone());
    }

    #[test]
    fn duality_preserves_hom_dims(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_algebra(&mut rng, field_for(fi), 4, true);
        let x = gen::random_module(&mut rng, &a, 5);
        let y = gen::random_module(&mut rng, &a, 5);
        let op = a.opposite_arc();
        let h1 = hom_space(&x, &y).unwrap().dim();
        let h2 = hom_space(&y.dual(&op), &x.dual(&op)).unwrap().dim();
        prop_assert_eq!(h1, h2);
    }

    #[test]
    fn kernel_image_accounting(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_algebra(&mut rng, field_for(fi), 4, true);
        let x = gen::random_module(&mut rng, &a, 5);
        let y = gen::random_module(&mut rng, &a, 5);
        let hs = hom_space(&x, &y).unwrap();
        if hs.dim() > 0 {
            let coeffs: Vec<_> = (0..hs.dim()).map(|_| gen::random_scalar(&mut rng, a.field())).collect();
            let h = hs.combination(&coeffs);
            prop_assert!(h.intertwines());
            let (k, _) = h.kernel();
            let (im, _, _) = h.image();
            let (c, _) = h.cokernel();
            prop_assert_eq!(k.dim() + im.dim(), x.dim());
            prop_assert_eq!(im.dim() + c.dim(), y.dim());
            prop_assert!(k.validate().is_ok() && c.validate().is_ok());
        }
    }

    #[test]
    fn radical_is_nilpotent_with_semisimple_quotient(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_algebra(&mut rng, field_for(fi), 4, true);
        let r = jacobson_radical(&a).unwrap();
        prop_assert!(is_nilpotent_ideal(&a, &r));
        prop_assert!(a.is_ideal(&r));
        let (q, _) = semisimple_quotient(&a).unwrap();
        prop_assert_eq!(jacobson_radical(&q).unwrap().cols(), 0);
    }

    #[test]
    fn ext_vanishes_above_global_dimension(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = fixtures::path_a2(Field::fp(5).unwrap());
        let x = gen::random_module(&mut rng, &a, 5);
        let y = gen::random_module(&mut rng, &a, 5);
        prop_assert_eq!(ext_group(&x, &y, 2).unwrap(), 0);
        prop_assert_eq!(ext_group(&x, &y, 3).unwrap(), 0);
    }

    #[test]
    fn resolutions_are_exact(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_algebra(&mut rng, field_for(fi), 4, true);
        let x = gen::random_module(&mut rng, &a, 5);
        let r = projective_resolution(&x, 3).unwrap();
        prop_assert!(r.complex.validate().is_ok());
        prop_assert!(r.complex.is_exact_interior());
        for t in &r.complex.terms {
            prop_assert!(is_projective(t).unwrap());
        }
        // exact at P^0 against the augmentation
        let p0 = r.complex.terms.last().unwrap();
        let k = r.augmentation.kernel().0.dim();
        let inc = if r.complex.terms.len() > 1 { r.complex.diffs.last().unwrap().rank() } else { 0 };
        prop_assert_eq!(k, inc);
        prop_assert!(r.augmentation.is_surjective());
        prop_assert_eq!(p0.dim() - k, x.dim());
    }
}
