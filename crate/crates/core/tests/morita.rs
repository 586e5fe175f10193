use std::sync::Arc;

use morita_gp::algebra::*;
use morita_gp::bimodule::{tensor_right_left, Tensor};
use morita_gp::error::Error;
use morita_gp::fixtures;
use morita_gp::gen;
use morita_gp::linalg::{Field, Mat};
use morita_gp::morita::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f3() -> Field {
    Field::fp(3).unwrap()
}

fn f5() -> Field {
    Field::fp(5).unwrap()
}

fn field_for(i: usize) -> Field {
    [Field::fp(2).unwrap(), f3(), Field::Q][i % 3]
}

fn hom_dim(x: &FDModule, y: &FDModule) -> usize {
    hom_space(x, y).unwrap().dim()
}

fn qhom_dim(s: &QuadrupleModule, t: &QuadrupleModule) -> usize {
    s.hom_space(t).unwrap().dim()
}

/// Permutation taking basis vectors of the opposite context's ring
/// (`A`, `M`, `N`, `B`) to those of `Λ` (`A`, `N`, `M`, `B`).
fn opposite_dictionary(ctx: &MoritaContext) -> Mat {
    let f = ctx.field();
    let (da, dn, dm, db) = (ctx.a.dim(), ctx.n.dim(), ctx.m.dim(), ctx.b.dim());
    let d = da + dn + dm + db;
    let mut p = Mat::zero(f, d, d);
    let one = f.from_i64(1);
    for t in 0..d {
        let target = if t < da {
            t
        } else if t < da + dm {
            da + dn + (t - da)
        } else if t < da + dm + dn {
            da + (t - da - dm)
        } else {
            t
        };
        p.set(target, t, &one);
    }
    p
}

/// `U ⊗_Λ V` straight from the ring: `U` is a right module presented over
/// the opposite context, reindexed into `Λ`'s basis.
fn brute_tensor(ctx: &Arc<MoritaContext>, u: &QuadrupleModule, v: &QuadrupleModule) -> usize {
    let ring = ctx.ring().unwrap();
    let um = u.to_module().unwrap();
    let p = opposite_dictionary(ctx);
    let right: Vec<Mat> = (0..ring.dim())
        .map(|t| {
            let src = (0..p.cols()).find(|&s| !p.entry_is_zero(t, s)).unwrap();
            um.action(src).clone()
        })
        .collect();
    FDModule::new(ring.ring.opposite_arc(), right.clone()).expect("right module over Λ");
    let vm = v.to_module().unwrap();
    Tensor::new(&ring.ring, &right, um.dim(), vm.actions(), vm.dim()).dim()
}

#[test]
fn triangular_context_is_upper_triangular_matrices() {
    let f = f3();
    let ctx = fixtures::triangular_context(f);
    let ring = ctx.ring().unwrap();
    assert_eq!(ring.dim(), 3);
    let ut = fixtures::upper_triangular(f, 2);
    assert!(is_algebra_hom(&ring.ring, &ut, &Mat::identity(f, 3)));
    assert_eq!(global_dimension(&ring.ring, 4).unwrap(), Some(1));
}

#[test]
fn two_cycle_ring() {
    let ctx = fixtures::two_cycle(Field::Q);
    let ring = ctx.ring().unwrap();
    assert_eq!(ring.dim(), 4);
    let rad = ring.ring.radical().unwrap();
    assert_eq!(rad.cols(), 2);
    assert!(ring.ring.product_span(rad, rad).cols() == 0);
    assert_eq!(ring.ring.idempotents().unwrap().n_classes(), 2);
}

#[test]
fn psi_example_ring() {
    let (ext, ctx) = fixtures::psi_example(f5());
    assert_eq!(ctx.ring().unwrap().dim(), 5);
    assert_eq!(ext.dim_ideal(), 1);
    assert!(ctx.phi_is_zero() && !ctx.psi_is_zero());
    assert_eq!(ctx.i_basis().cols(), 1);
}

#[test]
fn broken_psi_is_rejected_before_ring_construction() {
    let f = f5();
    let (_, ctx) = fixtures::psi_example(f);
    // ψ(n ⊗ m) = 1 is not A-linear since x n = 0.
    let bad = MoritaContext::new(
        ctx.a.clone(),
        ctx.b.clone(),
        ctx.m.clone(),
        ctx.n.clone(),
        ctx.phi.mat.clone(),
        Mat::from_i64(f, 2, 1, &[1, 0]),
    );
    assert!(matches!(bad, Err(Error::Invalid(_))));
    let unchecked = MoritaContext::new_unchecked(
        ctx.a.clone(),
        ctx.b.clone(),
        ctx.m.clone(),
        ctx.n.clone(),
        ctx.phi.mat.clone(),
        Mat::from_i64(f, 2, 1, &[1, 0]),
    );
    assert!(unchecked.validate().is_err());
    assert!(build_ring(&unchecked).is_err());
}

#[test]
fn recognize_dual_numbers_as_trivial_extension() {
    let f = f3();
    let d = fixtures::dual_numbers(f);
    let ext = recognize_trivial_extension(&d, &Mat::from_i64(f, 2, 1, &[1, 0]), &Mat::from_i64(f, 2, 1, &[0, 1])).unwrap();
    assert_eq!(ext.dim_lambda(), 1);
    assert_eq!(ext.ideal.dim(), 1);
    let kk = fixtures::k_times_k(f);
    let err = recognize_trivial_extension(&kk, &Mat::from_i64(f, 2, 1, &[1, 0]), &Mat::from_i64(f, 2, 1, &[0, 1]));
    assert!(matches!(err, Err(Error::Precondition(_))));
}

#[test]
fn projectives_of_the_triangular_ring() {
    let ctx = fixtures::triangular_context(f3());
    let ps = classify_projectives(&ctx).unwrap();
    let dims: Vec<(usize, usize)> = ps.iter().map(|c| (c.quadruple.x.dim(), c.quadruple.y.dim())).collect();
    // P1 = (k, 0, 0, 0) and P2 = (k, k, 0, id).
    assert_eq!(dims, vec![(1, 0), (1, 1)]);
    assert!(ps[1].quadruple.g.is_iso());
    let is = classify_injectives(&ctx).unwrap();
    for c in &is {
        assert!(is_injective_module(&c.quadruple.to_module().unwrap()).unwrap());
    }
}

#[test]
fn structural_maps_on_the_psi_example() {
    let (ext, ctx) = fixtures::psi_example(f5());
    let q = t_lambda(&ext, &ctx, &FDModule::regular(&ext.lambda)).unwrap();
    let sm = structural_maps(&ctx, &q).unwrap();
    assert!(sm.theta_x.is_injective());
    assert!(sm.m_x.is_injective());
    assert_eq!(sm.m_x.rank(), sm.ix_basis.cols());
    assert!(annihilation_identities(&ctx, &q));
    assert!(pushout_check(&ctx, &q).unwrap());
}

#[test]
fn structural_map_degenerations() {
    let f = f3();
    let ctx = fixtures::two_cycle(f);
    let k = ctx.a.clone();
    let one = FDModule::regular(&k);
    // g = 0 and ψ = 0: fine when Y = 0, precondition failure otherwise.
    let q = QuadrupleModule::with_zero_maps(&ctx, one.clone(), FDModule::zero(&ctx.b)).unwrap();
    assert!(pushout_check(&ctx, &q).unwrap());
    let q = QuadrupleModule::with_zero_maps(&ctx, FDModule::zero(&k), FDModule::regular(&ctx.b)).unwrap();
    assert!(matches!(pushout_check(&ctx, &q), Err(Error::Precondition(_))));
    // f = 0 forces η = 0; a surjective g leaves a zero cokernel.
    let sm = structural_maps(&ctx, &q).unwrap();
    assert!(sm.eta_y.is_zero());
    let p2 = t_b(&ctx, &FDModule::regular(&ctx.b)).unwrap();
    let sm = structural_maps(&ctx, &p2).unwrap();
    assert_eq!(sm.lambda_x.target.dim(), 0);
}

#[test]
fn projectives_satisfy_the_pushout_condition() {
    let (_, ctx) = fixtures::psi_example(f3());
    for c in classify_projectives(&ctx).unwrap() {
        assert!(pushout_check(&ctx, &c.quadruple).unwrap());
    }
}

#[test]
fn hom_identity_dimensions_on_the_regular_module() {
    let (ext, ctx) = fixtures::psi_example(f5());
    let lam = FDModule::regular(&ext.lambda);
    let inp = HomInputs { x: lam.clone(), x2: lam.clone(), y: FDModule::regular(&ctx.b), y2: FDModule::regular(&ctx.b) };
    let r = verify_hom_identity(&ext, &ctx, HomIdentity::ExtendedToInflated, &inp).unwrap();
    assert!(r.holds());
    assert_eq!(r.source_dim, hom_dim(&lam, &lam));
    let r = verify_hom_identity(&ext, &ctx, HomIdentity::TLambdaToTLambda, &inp).unwrap();
    let xi = ext.extended(&lam).unwrap();
    assert_eq!(r.source_dim, hom_dim(&lam, &lam.direct_sum(&xi.ix.module)));
    let tl = t_lambda(&ext, &ctx, &lam).unwrap();
    assert_eq!(r.target_dim, qhom_dim(&tl, &tl));
    assert!(r.holds());
}

#[test]
fn tensor_of_regular_right_module() {
    let (_, ctx) = fixtures::psi_example(f3());
    let op = ctx.opposite();
    let ring = op.ring().unwrap();
    let (u, _) = QuadrupleModule::from_module(&op, &FDModule::regular(&ring.ring)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let v = gen::random_quadruple(&mut rng, &ctx, 8);
        let t = tensor_over_morita(&ctx, &RightQuadruple::from_opposite(&u), &v).unwrap();
        assert_eq!(t.dim(), v.dim());
    }
}

#[test]
fn functor_names_round_trip() {
    for f in Functor::ALL {
        assert_eq!(Functor::parse(f.name()), Some(f));
    }
    assert_eq!(Functor::parse("nope"), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rings_are_associative_and_unital(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = gen::random_context(&mut rng, field_for(fi));
        let ring = ctx.ring().unwrap();
        prop_assert!(validate_algebra(&ring.ring).is_ok());
        prop_assert_eq!(ring.ring.mul(&ring.e1, &ring.e1), ring.e1.clone());
        prop_assert_eq!(ring.e1.add(&ring.e2), ring.ring.unit().clone());
    }

    #[test]
    fn opposite_context_ring_is_opposite_ring(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = gen::random_context(&mut rng, field_for(fi));
        let ring = ctx.ring().unwrap();
        let op = ctx.opposite();
        let opring = op.ring().unwrap();
        let p = opposite_dictionary(&ctx);
        prop_assert!(is_algebra_hom(&opring.ring, &ring.ring.opposite_arc(), &p));
    }

    #[test]
    fn quadruple_module_round_trip(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = gen::random_context(&mut rng, field_for(fi));
        let ring = ctx.ring().unwrap();
        let v = gen::random_module(&mut rng, &ring.ring, 10);
        let (q, p) = QuadrupleModule::from_module(&ctx, &v).unwrap();
        q.validate().unwrap();
        prop_assert_eq!(q.dim(), v.dim());
        let back = q.to_module().unwrap();
        let (moved, _) = v.transport(&p).unwrap();
        prop_assert_eq!(back.actions(), moved.actions());
        let (q2, _) = QuadrupleModule::from_module(&ctx, &back).unwrap();
        prop_assert_eq!((q2.x.dim(), q2.y.dim()), (q.x.dim(), q.y.dim()));
    }

    #[test]
    fn blockwise_kernels_and_cokernels_agree(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = gen::random_context(&mut rng, field_for(fi));
        let q1 = gen::random_quadruple(&mut rng, &ctx, 8);
        let q2 = gen::random_quadruple(&mut rng, &ctx, 8);
        let (m1, m2) = (q1.to_module().unwrap(), q2.to_module().unwrap());
        let hs = hom_space(&m1, &m2).unwrap();
        let coeffs: Vec<_> = (0..hs.dim()).map(|_| gen::random_scalar(&mut rng, ctx.field())).collect();
        let h = if hs.dim() == 0 { ModuleHom::zero(&m1, &m2) } else { hs.combination(&coeffs) };
        let qh = QuadrupleHom::from_module_hom(&q1, &q2, &h.mat).unwrap();
        let (k, kinc) = qh.kernel().unwrap();
        let (c, cproj) = qh.cokernel().unwrap();
        kinc.validate().unwrap();
        cproj.validate().unwrap();
        let (km, _) = h.kernel();
        let (cm, _) = h.cokernel();
        prop_assert!(is_isomorphic(&k.to_module().unwrap(), &km).unwrap().is_some());
        prop_assert!(is_isomorphic(&c.to_module().unwrap(), &cm).unwrap().is_some());
    }

    #[test]
    fn recollement_adjunction_dimensions(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = gen::random_context(&mut rng, field_for(fi));
        let q = gen::random_quadruple(&mut rng, &ctx, 8);
        let x = gen::random_module(&mut rng, &ctx.a, 4);
        let y = gen::random_module(&mut rng, &ctx.b, 4);
        let ta = t_a(&ctx, &x).unwrap();
        let ha = h_a(&ctx, &x).unwrap();
        let tb = t_b(&ctx, &y).unwrap();
        let hb = h_b(&ctx, &y).unwrap();
        for t in [&ta, &ha, &tb, &hb] {
            t.validate().unwrap();
        }
        prop_assert_eq!(qhom_dim(&ta, &q), hom_dim(&x, &q.x));
        prop_assert_eq!(qhom_dim(&q, &ha), hom_dim(&q.x, &x));
        prop_assert_eq!(qhom_dim(&tb, &q), hom_dim(&y, &q.y));
        prop_assert_eq!(qhom_dim(&q, &hb), hom_dim(&q.y, &y));
        // Q ⊣ Z ⊣ P on both corners, tested against A/I- and B/J-modules.
        let (qa, _) = q_a(&q);
        let (qb, _) = q_b(&q);
        let (pa, _) = p_a(&q).unwrap();
        let (pb, _) = p_b(&q).unwrap();
        let u = x.quotient(&x.ideal_times(ctx.i_basis())).0;
        let v = y.quotient(&y.ideal_times(ctx.j_basis())).0;
        let za = z_a(&ctx, &u).unwrap();
        let zb = z_b(&ctx, &v).unwrap();
        prop_assert_eq!(qhom_dim(&q, &za), hom_dim(&qa, &u));
        prop_assert_eq!(qhom_dim(&za, &q), hom_dim(&u, &pa));
        prop_assert_eq!(qhom_dim(&q, &zb), hom_dim(&qb, &v));
        prop_assert_eq!(qhom_dim(&zb, &q), hom_dim(&v, &pb));
    }

    #[test]
    fn classified_projectives_and_injectives(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = gen::random_context(&mut rng, field_for(fi));
        let n = ctx.ring().unwrap().dim();
        let ps = classify_projectives(&ctx).unwrap();
        let mut total = 0;
        for c in &ps {
            let m = c.quadruple.to_module().unwrap();
            prop_assert!(is_projective(&m).unwrap());
            prop_assert_eq!(decompose(&m).unwrap().len(), 1);
            total += c.multiplicity * m.dim();
        }
        prop_assert_eq!(total, n);
        let mut total = 0;
        for c in &classify_injectives(&ctx).unwrap() {
            let m = c.quadruple.to_module().unwrap();
            prop_assert!(is_injective_module(&m).unwrap());
            total += c.multiplicity * m.dim();
        }
        prop_assert_eq!(total, n);
    }

    #[test]
    fn annihilation_identities_hold(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, ctx) = gen::random_psi_context(&mut rng, field_for(fi));
        let q = gen::random_quadruple(&mut rng, &ctx, 10);
        prop_assert!(annihilation_identities(&ctx, &q));
        let sm = structural_maps(&ctx, &q).unwrap();
        // The factorizations the maps are defined by.
        let mlt = sm.m_x.mat.matmul(&morita_gp::bimodule::tensor_map(&ideal_bimodule(&ctx).unwrap(), &sm.lambda_x).unwrap().mat);
        prop_assert_eq!(mlt, sm.mlt_x.mat.clone());
        prop_assert_eq!(sm.m_x.mat.image_basis().cols(), sm.ix_basis.cols());
    }

    #[test]
    fn pushout_check_contract(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, ctx) = gen::random_psi_context(&mut rng, field_for(fi));
        let q = gen::random_quadruple(&mut rng, &ctx, 10);
        let sm = structural_maps(&ctx, &q).unwrap();
        let r = pushout_check(&ctx, &q);
        if sm.theta_x.is_injective() && sm.m_x.is_injective() {
            prop_assert!(r.is_ok());
        } else {
            prop_assert!(matches!(r, Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn t_lambda_matches_t_a_of_induced(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ext, ctx) = gen::random_psi_context(&mut rng, field_for(fi));
        let x = gen::random_module(&mut rng, &ext.lambda, 4);
        let iso = t_lambda_iso(&ext, &ctx, &x).unwrap();
        prop_assert!(iso.is_iso());
        let x2 = gen::random_module(&mut rng, &ext.lambda, 4);
        let hs = hom_space(&x, &x2).unwrap();
        let coeffs: Vec<_> = (0..hs.dim()).map(|_| gen::random_scalar(&mut rng, ctx.field())).collect();
        let h = if hs.dim() == 0 { ModuleHom::zero(&x, &x2) } else { hs.combination(&coeffs) };
        prop_assert!(t_lambda_hom(&ext, &ctx, &h).is_ok());
    }

    #[test]
    fn hom_identities_hold(seed in any::<u64>(), fi in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ext, ctx) = gen::random_psi_context(&mut rng, field_for(fi));
        let inp = HomInputs {
            x: gen::random_module(&mut rng, &ext.lambda, 3),
            x2: gen::random_module(&mut rng, &ext.lambda, 3),
            y: gen::random_module(&mut rng, &ctx.b, 3),
            y2: gen::random_module(&mut rng, &ctx.b, 3),
        };
        for which in HomIdentity::ALL {
            let r = verify_hom_identity(&ext, &ctx, which, &inp).unwrap();
            prop_assert!(r.holds(), "{:?}", r);
        }
    }

    #[test]
    fn tensor_over_morita_matches_brute_force(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = gen::random_context(&mut rng, field_for(fi));
        let op = ctx.opposite();
        let u = gen::random_quadruple(&mut rng, &op, 8);
        let v = gen::random_quadruple(&mut rng, &ctx, 8);
        let t = tensor_over_morita(&ctx, &RightQuadruple::from_opposite(&u), &v).unwrap();
        prop_assert_eq!(t.dim(), brute_tensor(&ctx, &u, &v));
    }

    #[test]
    fn zero_modules_against_t_functors(seed in any::<u64>(), fi in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ext, ctx) = gen::random_psi_context(&mut rng, field_for(fi));
        let op = ctx.opposite();
        let x = gen::random_module(&mut rng, &ext.lambda, 3);
        let y = gen::random_module(&mut rng, &ctx.b, 3);
        let c = gen::random_module(&mut rng, &ext.lambda.opposite_arc(), 3);
        let d = gen::random_module(&mut rng, &op.b, 3);
        let c_a = c.restrict(&op.a, &ext.proj);
        let zc = RightQuadruple::from_opposite(&z_a(&op, &c_a).unwrap());
        let zd = RightQuadruple::from_opposite(&z_b(&op, &d).unwrap());
        let tl = t_lambda(&ext, &ctx, &x).unwrap();
        let tb = t_b(&ctx, &y).unwrap();
        prop_assert_eq!(tensor_over_morita(&ctx, &zc, &tl).unwrap().dim(), tensor_right_left(&c, &x).dim());
        prop_assert_eq!(tensor_over_morita(&ctx, &zd, &tb).unwrap().dim(), tensor_right_left(&d, &y).dim());
        prop_assert_eq!(tensor_over_morita(&ctx, &zc, &tb).unwrap().dim(), 0);
        prop_assert_eq!(tensor_over_morita(&ctx, &zd, &tl).unwrap().dim(), 0);
    }
}
