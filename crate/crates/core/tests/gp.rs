use std::sync::Arc;

use morita_gp::algebra::*;
use morita_gp::bimodule::Bimodule;
use morita_gp::complex::*;
use morita_gp::error::Error;
use morita_gp::fixtures;
use morita_gp::gen;
use morita_gp::gp::*;
use morita_gp::linalg::{Field, Mat};
use morita_gp::morita::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f3() -> Field {
    Field::fp(3).unwrap()
}

fn bounds() -> SearchBounds {
    SearchBounds { window: 4, period_bound: 4, budget: 400 }
}

fn quad(ctx: &Arc<MoritaContext>, x: FDModule, y: FDModule, fk: &[i64], gk: &[i64]) -> QuadrupleModule {
    let f = ctx.field();
    let (mx, ny) = (ctx.m.dim() * x.dim(), ctx.n.dim() * y.dim());
    let fk = Mat::from_i64(f, y.dim(), mx, fk);
    let gk = Mat::from_i64(f, x.dim(), ny, gk);
    QuadrupleModule::from_k_maps(ctx, x, y, &fk, &gk).unwrap()
}

/// `P_1`, `P_2`, `S_2` of the triangular context.
fn triangular_family(ctx: &Arc<MoritaContext>) -> Vec<QuadrupleModule> {
    let k = ctx.a.clone();
    let one = || FDModule::regular(&k);
    vec![
        quad(ctx, one(), FDModule::zero(&ctx.b), &[], &[]),
        quad(ctx, one(), one(), &[], &[1]),
        quad(ctx, FDModule::zero(&k), one(), &[], &[]),
    ]
}

fn two_cycle_simples(ctx: &Arc<MoritaContext>) -> Vec<QuadrupleModule> {
    let k = ctx.a.clone();
    vec![
        QuadrupleModule::with_zero_maps(ctx, FDModule::regular(&k), FDModule::zero(&k)).unwrap(),
        QuadrupleModule::with_zero_maps(ctx, FDModule::zero(&k), FDModule::regular(&k)).unwrap(),
    ]
}

// Oracle: Hom spaces and homology by solving the intertwining equations
// `h T_g = R_g h` directly, with `vec` row-major.

fn hom_basis(t: &FDModule, r: &FDModule) -> Mat {
    let f = t.field();
    let (s, n) = (t.dim(), r.dim());
    let eqs: Vec<Mat> = (0..t.algebra().dim())
        .map(|g| Mat::identity(f, n).tensor_k(&t.action(g).transpose()).sub(&r.action(g).tensor_k(&Mat::identity(f, s))))
        .collect();
    let refs: Vec<&Mat> = eqs.iter().collect();
    if refs.is_empty() || n * s == 0 {
        return Mat::identity(f, n * s);
    }
    Mat::vstack(&refs).kernel_basis()
}

/// Homology dimensions of `Hom(C, R)` at the interior terms.
fn hom_homology_oracle(c: &ComplexWindow, r: &FDModule) -> Vec<usize> {
    let f = r.field();
    let homs: Vec<Mat> = c.terms.iter().map(|t| hom_basis(t, r)).collect();
    // rank of `- ∘ d^k : Hom(C^{k+1}, R) -> Hom(C^k, R)`
    let ranks: Vec<usize> = c
        .diffs
        .iter()
        .enumerate()
        .map(|(k, d)| Mat::identity(f, r.dim()).tensor_k(&d.mat.transpose()).matmul(&homs[k + 1]).rank())
        .collect();
    (1..c.terms.len() - 1).map(|k| homs[k].cols() - ranks[k - 1] - ranks[k]).collect()
}

fn exact_oracle(c: &ComplexWindow) -> bool {
    let ranks: Vec<usize> = c.diffs.iter().map(|d| d.mat.rank()).collect();
    (1..c.terms.len() - 1).all(|k| c.terms[k].dim() == ranks[k - 1] + ranks[k])
}

/// Every check on an assembled `T•`, done without the library verifier.
fn verify_assembly(ra: &ResolutionAssembly, q: &QuadrupleModule) {
    let w = ra.t.as_window().unwrap();
    let c = &w.window;
    for d in c.diffs.windows(2) {
        assert!(d[1].mat.matmul(&d[0].mat).is_zero(), "d^2 != 0");
    }
    assert!(exact_oracle(c), "T is not exact");
    let ring = c.algebra().clone();
    let reg = FDModule::regular(&ring);
    assert!(hom_homology_oracle(c, &reg).iter().all(|&h| h == 0), "Hom(T, ring) not exact");
    for t in &c.terms {
        let pc = projective_cover(t).unwrap();
        assert_eq!(pc.module.dim(), t.dim(), "term is not projective");
    }
    let d0 = c.diff(0).mat.clone();
    let k = &ra.t.kernel;
    k.validate().unwrap();
    let km = k.module_matrix();
    assert_eq!(km.rank(), q.dim(), "kernel map is not injective");
    assert_eq!(q.dim(), d0.cols() - d0.rank(), "Ker d^0 has the wrong dimension");
    assert!(d0.matmul(&km).is_zero(), "kernel map misses Ker d^0");
    assert_eq!(k.source.f.mat, q.f.mat);
    assert_eq!(k.source.g.mat, q.g.mat);
}

#[test]
fn triangular_criterion_examples() {
    let ctx = fixtures::triangular_context(f3());
    let ext = zero_ideal_extension(&ctx.a);
    let fam = triangular_family(&ctx);
    let r: Vec<CriterionReport> = fam.iter().map(|q| check_conditions(&ext, &ctx, q, bounds()).unwrap()).collect();
    assert_eq!(r[0].overall, Overall::Pass);
    assert_eq!(r[1].overall, Overall::Pass);
    assert_eq!(r[2].overall, Overall::Fail(Clause::IsoB2));
    assert_eq!(r[2].failures(), vec![Clause::IsoB2]);
    // N ⊗ Coker f = k while Im g = 0.
    assert_eq!(r[2].iso_b2.source_dim(), 1);
    assert_eq!(r[2].iso_b2.image_dim(), 0);
    for (q, rep) in fam.iter().zip(&r) {
        assert_eq!(rep.passes(), is_projective(&q.to_module().unwrap()).unwrap());
    }
}

#[test]
fn criterion_rejects_mismatched_inputs() {
    let ctx = fixtures::triangular_context(f3());
    let (ext, _) = fixtures::psi_example(f3());
    let q = triangular_family(&ctx).remove(1);
    assert!(check_conditions(&ext, &ctx, &q, bounds()).is_err());
}

#[test]
fn zero_case_examples() {
    let f = f3();
    let ctx = fixtures::two_cycle(f);
    let s = two_cycle_simples(&ctx);
    let r1 = zero_case_check(&ctx, &s[0], bounds()).unwrap();
    assert_eq!(r1.overall, Overall::Fail(Clause::IsoB1));
    let r2 = zero_case_check(&ctx, &s[1], bounds()).unwrap();
    assert_eq!(r2.clause_status(Clause::IsoB2), Some(false));
    let ring = ctx.ring().unwrap().ring.clone();
    let (p, _) = QuadrupleModule::from_module(&ctx, &FDModule::regular(&ring)).unwrap();
    let rp = zero_case_check(&ctx, &p, bounds()).unwrap();
    assert_eq!(rp.overall, Overall::Pass);
    assert_eq!(rp.clause_status(Clause::IsoB3), Some(true));

    let (_, pctx) = fixtures::psi_example(f);
    let q = QuadrupleModule::zero(&pctx);
    assert!(matches!(zero_case_check(&pctx, &q, bounds()), Err(Error::Precondition(_))));
}

#[test]
fn total_resolution_of_p2() {
    let ctx = fixtures::triangular_context(f3());
    let ext = zero_ideal_extension(&ctx.a);
    let p2 = triangular_family(&ctx).remove(1);
    // Coker g = 0 and Coker f = k.
    let pw = split_window(&FDModule::zero(&ext.lambda), 4);
    let qw = split_window(&FDModule::regular(&ctx.b), 4);
    let ra = build_total_resolution(&ext, &ctx, &p2, &pw, &qw, 4).unwrap();
    for m in ra.rho.iter().chain(&ra.tau).chain(&ra.alpha).chain(&ra.beta) {
        assert!(m.is_zero());
    }
    assert_eq!(ra.t.lo, -4);
    assert_eq!(ra.t.hi(), 4);
    verify_assembly(&ra, &p2);
    for b in &ra.t.blocks {
        for m in b {
            m.validate().unwrap();
        }
    }
}

#[test]
fn total_resolution_of_projectives_is_split() {
    let f = f3();
    let ctx = fixtures::triangular_context(f);
    let ext = zero_ideal_extension(&ctx.a);
    let (pext, pctx) = fixtures::psi_example(f);
    for (e, c) in [(&ext, &ctx), (&pext, &pctx)] {
        let ring = c.ring().unwrap().ring.clone();
        let (q, _) = QuadrupleModule::from_module(c, &FDModule::regular(&ring)).unwrap();
        let (rep, ra) = resolve_and_build(e, c, &q, bounds()).unwrap();
        assert!(rep.passes());
        verify_assembly(&ra, &q);
        // Coker f and Coker g are projective, so T is split exact.
        let w = ra.t.as_window().unwrap();
        assert!(w.window.terms.iter().all(|t| is_projective(t).unwrap()));
    }
}

#[test]
fn total_resolution_on_psi_example() {
    let (ext, ctx) = fixtures::psi_example(f3());
    let k = FDModule::regular(&ext.lambda);
    let q = t_lambda(&ext, &ctx, &k).unwrap();
    let (rep, ra) = resolve_and_build(&ext, &ctx, &q, bounds()).unwrap();
    assert!(rep.passes());
    verify_assembly(&ra, &q);
    // N, M, I are one-dimensional and ψ is invertible, so τ and ρ have the
    // same rank in every degree.
    for (r, t) in ra.rho.iter().zip(&ra.tau) {
        assert_eq!(r.rank(), t.rank());
    }
}

#[test]
fn build_requires_the_criterion() {
    let ctx = fixtures::triangular_context(f3());
    let ext = zero_ideal_extension(&ctx.a);
    let s2 = triangular_family(&ctx).remove(2);
    assert!(matches!(resolve_and_build(&ext, &ctx, &s2, bounds()), Err(Error::Precondition(_))));
}

#[test]
fn compat_semisimple_and_field_cases() {
    let f = f3();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = fixtures::k_times_k(f);
    let b = fixtures::ground(f);
    for _ in 0..5 {
        let bim = gen::random_bimodule(&mut rng, &a, &b, 3);
        let v = check_compat(&bim, &[], 4).unwrap();
        assert_eq!(v, CompatVerdict::WeaklyCompatible { reason: CompatReason::FiniteInjDim(0, 0) });
        assert!(v.is_proven());
    }
    let k = fixtures::ground(f);
    let v = check_compat(&Bimodule::regular(&k), &[], 4).unwrap();
    assert!(v.is_proven());
}

#[test]
fn compat_tor_witness() {
    let f = f3();
    let k = fixtures::ground(f);
    let b = fixtures::dual_numbers(f);
    let n = fixtures::scalar_bimodule(&k, &b, &[1], &[1, 0]);
    let simple = fixtures::trivial_module(&b);
    let test = complete_resolution(&simple, bounds()).unwrap().window;
    let v = check_compat(&n, &[test.clone()], 4).unwrap();
    let CompatVerdict::NotCompatible { witness: CompatWitness::Tor1 { degree, dim, .. } } = v else {
        panic!("expected a Tor witness, got {v:?}");
    };
    assert!(dim > 0);
    // Oracle: every kernel of the test complex is k, and Tor_1(k, k) = k
    // over the dual numbers.
    assert_eq!(test.diff(degree).kernel().0.dim(), 1);
    assert!(!v.is_proven());
}

#[test]
fn compat_rejects_non_exact_tests() {
    let f = f3();
    let k = fixtures::ground(f);
    let b = fixtures::dual_numbers(f);
    let n = fixtures::scalar_bimodule(&k, &b, &[1], &[1, 0]);
    let reg = FDModule::regular(&b);
    let bad = ComplexWindow::new(0, vec![reg.clone(), reg.clone(), reg.clone()], vec![ModuleHom::zero(&reg, &reg); 2]).unwrap();
    assert!(check_compat(&n, &[bad], 4).is_err());
}

#[test]
fn composition_rule() {
    let f = f3();
    let k = fixtures::ground(f);
    let x = Bimodule::regular(&k);
    let (xy, v) = compose_compatible(&x, &x, 4).unwrap().unwrap();
    assert_eq!(xy.dim(), 1);
    assert_eq!(v, CompatVerdict::WeaklyCompatible { reason: CompatReason::Composition });
    assert!(v.is_proven());
}

#[test]
fn semi_weak_two_cycle_fails() {
    let ctx = fixtures::two_cycle(f3());
    let s1 = two_cycle_simples(&ctx).remove(0).to_module().unwrap();
    let cert = certify_gorenstein_projective(&s1, bounds()).unwrap();
    assert_eq!(cert.is_gp(), Some(true));
    let Verdict::CertifiedGP { resolution, .. } = &cert.verdict else { unreachable!() };
    let tests = vec![resolution.window.clone()];
    let v = check_semi_weak_quadruple(&ctx, SemiWeakSide::LeftN, &tests).unwrap();
    assert!(v.is_failure(), "{v:?}");
    assert!(matches!(v, CompatVerdict::SemiWeak { c1: Some(false), witness: Some(CompatWitness::Homology { .. }), .. }));
    // Oracle: the Hom complex into (N, 0, 0, 0) has one-dimensional
    // homology in every other degree, matching the witness.
    let z = QuadrupleModule::with_zero_maps(&ctx, ctx.n.as_left(), FDModule::zero(&ctx.b)).unwrap().to_module().unwrap();
    let h = hom_homology_oracle(&tests[0], &z);
    assert!(h.iter().all(|&d| d <= 1) && h.iter().filter(|&&d| d == 1).count() * 2 + 1 >= h.len(), "{h:?}");
    let CompatVerdict::SemiWeak { witness: Some(CompatWitness::Homology { degree, dim, .. }), .. } = v else { unreachable!() };
    assert_eq!(h[(degree - tests[0].lo - 1) as usize], dim);
    // I = 0: the I-sides pass vacuously.
    for side in [SemiWeakSide::LeftI, SemiWeakSide::RightI] {
        let v = check_semi_weak_quadruple(&ctx, side, &tests).unwrap();
        assert!(!v.is_failure());
    }
    let none = check_semi_weak_quadruple(&ctx, SemiWeakSide::LeftN, &[]).unwrap();
    assert!(matches!(none, CompatVerdict::Undetermined { .. }));
}

#[test]
fn semi_weak_semisimple_ring_passes() {
    let f = f3();
    let k = fixtures::ground(f);
    let one = fixtures::scalar_bimodule(&k, &k, &[1], &[1]);
    let id = Mat::identity(f, 1);
    let ctx = MoritaContext::new(k.clone(), k, one.clone(), one, id.clone(), id).unwrap();
    let ring = ctx.ring().unwrap().ring.clone();
    let tests = vec![split_window(&FDModule::regular(&ring), 2).window];
    for side in SemiWeakSide::ALL {
        let v = check_semi_weak_quadruple(&ctx, side, &tests).unwrap();
        assert!(matches!(v, CompatVerdict::SemiWeak { witness: None, .. }), "{}: {v:?}", side.name());
    }
}

#[test]
fn audit_triangular_agrees() {
    let ctx = fixtures::triangular_context(f3());
    let ext = zero_ideal_extension(&ctx.a);
    let rep = audit_equivalence(&ext, &ctx, &triangular_family(&ctx), bounds()).unwrap();
    assert_eq!(rep.rows.len(), 3);
    assert!(rep.rows.iter().all(|r| matches!(r.class, AuditClass::Agree)), "{rep:?}");
    assert!(rep.consistent());
    assert_eq!(rep.rows[2].failing_clause.as_deref(), Some("iso_b2"));
    assert!(rep.hypotheses.unwrap().weak_proven());
}

#[test]
fn audit_two_cycle_expected_divergence() {
    let ctx = fixtures::two_cycle(f3());
    let ext = zero_ideal_extension(&ctx.a);
    let rep = audit_equivalence(&ext, &ctx, &two_cycle_simples(&ctx), bounds()).unwrap();
    let row = &rep.rows[0];
    assert_eq!(row.criterion, Some(false));
    assert_eq!(row.failing_clause.as_deref(), Some("iso_b1"));
    assert_eq!(row.certificate, Some(true));
    let AuditClass::ExpectedDivergence { hypothesis, witness } = &row.class else {
        panic!("expected divergence, got {:?}", row.class);
    };
    assert!(hypothesis.contains("semi-weak"), "{hypothesis}");
    assert!(witness.is_failure());
    assert!(rep.consistent());
}

#[test]
fn audit_empty_family() {
    let ctx = fixtures::triangular_context(f3());
    let ext = zero_ideal_extension(&ctx.a);
    let rep = audit_equivalence(&ext, &ctx, &[], bounds()).unwrap();
    assert!(rep.rows.is_empty());
    assert!(rep.hypotheses.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    /// Whenever the criterion passes with proof-grade compatibility of
    /// `N`, `M` and `I`, the construction succeeds and verifies.
    #[test]
    fn soundness_on_random_psi_contexts(seed in 0u64..10_000, fi in 0usize..2) {
        let f = [Field::fp(2).unwrap(), f3()][fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ext, ctx) = gen::random_psi_context(&mut rng, f);
        let q = gen::random_quadruple(&mut rng, &ctx, 4);
        let rep = check_conditions(&ext, &ctx, &q, bounds()).unwrap();
        let truth = certify_gorenstein_projective(&q.to_module().unwrap(), bounds()).unwrap();
        let proven = [ext.restrict_left(&ctx.n), ext.restrict_right(&ctx.m), ext.ideal.clone()]
            .iter()
            .all(|b| check_compat(b, &[], 4).unwrap().is_proven());
        if rep.passes() && proven {
            let (_, ra) = resolve_and_build(&ext, &ctx, &q, bounds()).unwrap();
            verify_assembly(&ra, &q);
            prop_assert_ne!(truth.is_gp(), Some(false));
        }
    }
}

#[test]
fn soundness_sweep_exercises_the_construction() {
    let (mut built, mut nonprojective) = (0, 0);
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ext, ctx) = gen::random_psi_context(&mut rng, f3());
        let q = gen::random_quadruple(&mut rng, &ctx, 4);
        if !check_conditions(&ext, &ctx, &q, bounds()).unwrap().passes() {
            continue;
        }
        match resolve_and_build(&ext, &ctx, &q, bounds()) {
            Ok((_, ra)) => {
                verify_assembly(&ra, &q);
                built += 1;
                nonprojective += usize::from(!is_projective(&q.to_module().unwrap()).unwrap());
            }
            Err(e) => {
                // Only allowed when some bimodule lacks a proof of compatibility.
                let proven = [ext.restrict_left(&ctx.n), ext.restrict_right(&ctx.m), ext.ideal.clone()]
                    .iter()
                    .all(|b| check_compat(b, &[], 6).unwrap().is_proven());
                assert!(!proven, "seed {seed}: {e}");
            }
        }
    }
    assert!(built > 100, "{built}");
    assert!(nonprojective > 0);
}
