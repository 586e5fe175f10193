//! Seeded random instances for property tests, sweeps and benches.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{simple_modules, Algebra, FDModule};
use crate::bimodule::{bimodule_hom_space, tensor_bimodules, Bimodule};
use crate::fixtures;
use crate::linalg::{Field, Mat, Scalar};
use crate::morita::{trivial_extension, MoritaContext, QuadrupleModule, TrivialExtension};

pub fn random_scalar<R: Rng>(rng: &mut R, f: Field) -> Scalar {
    match f {
        Field::Fp(p) => f.element(rng.gen_range(0..p as u64)),
        Field::Q => f.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn random_mat<R: Rng>(rng: &mut R, f: Field, rows: usize, cols: usize) -> Mat {
    let v: Vec<Scalar> = (0..rows * cols).map(|_| random_scalar(rng, f)).collect();
    Mat::from_scalars(f, rows, cols, &v).expect("shape")
}

pub fn random_invertible<R: Rng>(rng: &mut R, f: Field, n: usize) -> Mat {
    loop {
        let m = random_mat(rng, f, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// A small split algebra drawn from a fixed family, of dimension at most
/// `max_dim`, optionally in a random basis.
pub fn random_algebra<R: Rng>(rng: &mut R, f: Field, max_dim: usize, twist: bool) -> Arc<Algebra> {
    let mut pool: Vec<Arc<Algebra>> = vec![
        fixtures::ground(f),
        fixtures::k_times_k(f),
        fixtures::dual_numbers(f),
        fixtures::path_a2(f),
        fixtures::truncated_poly(f, 3),
        fixtures::upper_triangular(f, 2),
    ];
    pool.push(Arc::new(fixtures::k_times_k(f).direct_product(&fixtures::ground(f))));
    pool.push(Arc::new(fixtures::dual_numbers(f).direct_product(&fixtures::ground(f))));
    pool.push(fixtures::matrix_algebra(f, 2));
    pool.retain(|a| a.dim() <= max_dim.max(1));
    let a = pool.choose(rng).unwrap().clone();
    if twist && a.dim() > 1 {
        let p = random_invertible(rng, f, a.dim());
        Arc::new(a.change_basis(&p).expect("invertible"))
    } else {
        a
    }
}

/// A random module: submodule or quotient of `A^r` generated by a few
/// random vectors, possibly in a random basis. Dimension at most `max_dim`
/// when possible.
pub fn random_module<R: Rng>(rng: &mut R, alg: &Arc<Algebra>, max_dim: usize) -> FDModule {
    let f = alg.field();
    for _ in 0..32 {
        let r = rng.gen_range(1..=2);
        let free = FDModule::regular(alg).power(r);
        let k = rng.gen_range(0..=2);
        let vecs = random_mat(rng, f, free.dim(), k);
        let span = free.generated_by(&vecs);
        let m = if rng.gen_bool(0.5) {
            free.submodule(&span).expect("generated submodule").0
        } else {
            free.quotient(&span).0
        };
        if m.dim() > max_dim {
            continue;
        }
        if m.dim() > 1 && rng.gen_bool(0.5) {
            let p = random_invertible(rng, f, m.dim());
            return m.transport(&p).expect("invertible").0;
        }
        return m;
    }
    FDModule::zero(alg)
}

/// A small `A`-`B`-bimodule: zero, a tensor of simples, the free bimodule
/// `A ⊗_k B`, or `A` itself when `A = B`.
pub fn random_bimodule<R: Rng>(rng: &mut R, a: &Arc<Algebra>, b: &Arc<Algebra>, max_dim: usize) -> Bimodule {
    let f = a.field();
    let mut choices = vec![0, 1, 1];
    if a.dim() * b.dim() <= max_dim {
        choices.push(2);
    }
    if Arc::ptr_eq(a, b) {
        choices.push(3);
    }
    match *choices.choose(rng).unwrap() {
        0 => Bimodule::zero(a, b),
        1 => {
            let sa = simple_modules(a).expect("split algebra");
            let sb = simple_modules(&b.opposite_arc()).expect("split algebra");
            let (s, t) = (sa.choose(rng).unwrap(), sb.choose(rng).unwrap());
            let (is, it) = (Mat::identity(f, s.dim()), Mat::identity(f, t.dim()));
            Bimodule::new_unchecked(
                a.clone(),
                b.clone(),
                s.dim() * t.dim(),
                s.actions().iter().map(|l| l.tensor_k(&it)).collect(),
                t.actions().iter().map(|r| is.tensor_k(r)).collect(),
            )
        }
        2 => {
            let (ia, ib) = (Mat::identity(f, a.dim()), Mat::identity(f, b.dim()));
            Bimodule::new_unchecked(
                a.clone(),
                b.clone(),
                a.dim() * b.dim(),
                a.lefts().iter().map(|l| l.tensor_k(&ib)).collect(),
                b.rights().iter().map(|r| ia.tensor_k(r)).collect(),
            )
        }
        _ => Bimodule::regular(a),
    }
}

/// A random `Λ_ψ`: `A = Λ ⋉ I` with `I` the image of a random bimodule map
/// `ψ : N ⊗_B M -> I_0`.
pub fn random_psi_context<R: Rng>(rng: &mut R, f: Field) -> (TrivialExtension, Arc<MoritaContext>) {
    loop {
        let lam = random_algebra(rng, f, 3, false);
        let b = random_algebra(rng, f, 3, false);
        let m = random_bimodule(rng, &b, &lam, 4);
        let n = random_bimodule(rng, &lam, &b, 4);
        let Ok((nm, t)) = tensor_bimodules(&n, &m) else { continue };
        if nm.dim() > 6 {
            continue;
        }
        let i0 = match rng.gen_range(0..3) {
            0 => nm.clone(),
            1 => Bimodule::regular(&lam),
            _ => random_bimodule(rng, &lam, &lam, 4),
        };
        let Ok(hs) = bimodule_hom_space(&nm, &i0) else { continue };
        let coeffs: Vec<Scalar> = (0..hs.dim()).map(|_| random_scalar(rng, f)).collect();
        let h = if hs.dim() == 0 { Mat::zero(f, i0.dim(), nm.dim()) } else { hs.combination(&coeffs).mat };
        let img = h.image_basis();
        let Ok((ideal, incl)) = i0.sub(&img) else { continue };
        let coords = incl.left_inverse().expect("basis");
        let psi_i = coords.matmul(&h).matmul(t.proj());
        let Ok(ext) = trivial_extension(&lam, &ideal) else { continue };
        if let Ok(ctx) = ext.psi_context(&b, &m, &n, &psi_i) {
            return (ext, ctx);
        }
    }
}

/// A random valid context: a `Λ_ψ`, a context with zero maps, or
/// `(A, A, A, A, c μ, c μ)` with `μ` the multiplication.
pub fn random_context<R: Rng>(rng: &mut R, f: Field) -> Arc<MoritaContext> {
    match rng.gen_range(0..3) {
        0 => random_psi_context(rng, f).1,
        1 => loop {
            let twist = rng.gen_bool(0.3);
            let a = random_algebra(rng, f, 3, twist);
            let b = random_algebra(rng, f, 3, false);
            let m = random_bimodule(rng, &b, &a, 4);
            let n = random_bimodule(rng, &a, &b, 4);
            if let Ok(ctx) = MoritaContext::zero_maps(a, b, m, n) {
                return ctx;
            }
        },
        _ => {
            let twist = rng.gen_bool(0.3);
            let a = random_algebra(rng, f, 3, twist);
            let c = random_scalar(rng, f);
            let d = a.dim();
            let mu: Vec<Mat> = (0..d * d).map(|ij| a.mul(&a.basis(ij / d), &a.basis(ij % d))).collect();
            let mu = Mat::from_cols(f, d, &mu).scale(&c);
            let reg = Bimodule::regular(&a);
            MoritaContext::new(a.clone(), a, reg.clone(), reg, mu.clone(), mu).expect("scaled multiplication is a context")
        }
    }
}

/// A random `Λ_(φ,ψ)`-module read as a quadruple.
pub fn random_quadruple<R: Rng>(rng: &mut R, ctx: &Arc<MoritaContext>, max_dim: usize) -> QuadrupleModule {
    let ring = ctx.ring().expect("valid context");
    let v = random_module(rng, &ring.ring, max_dim);
    QuadrupleModule::from_module(ctx, &v).expect("module over the ring").0
}
