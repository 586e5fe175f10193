//! Explicit Hom identifications over `Λ ⋉ I` and `Λ_ψ`, and tensor products
//! over a Morita ring presented by generators and relations.

use std::sync::Arc;

use crate::algebra::{hom_space, FDModule, HomSpace, ModuleHom};
use crate::bimodule::{balance_relations, tensor_map_between, tensor_over};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Quotient};

use super::functors::{t_b, z_a, z_b};
use super::trivial::{t_lambda, TrivialExtension};
use super::{MoritaContext, QuadrupleModule};

/// The elementwise formulas identifying Hom spaces. `X, X'` are
/// `Λ`-modules, `Y, Y'` are `B`-modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomIdentity {
    /// `Hom_Λ(X, X') -> Hom_A(X(I), X')`, `f -> [f 0]`.
    ExtendedToInflated,
    /// `Hom_Λ(X, I ⊗ X') -> Hom_A(X, X'(I))`, `g -> [0; g]`. Injective only.
    IntoExtendedIdeal,
    /// `Hom_Λ(X, X' ⊕ I ⊗ X') -> Hom_A(X(I), X'(I))`.
    ExtendedToExtended,
    /// `Hom_Λ(X, N ⊗ Y) -> Hom(T_Λ X, T_B Y)`, `f -> ([f 0], 0)`.
    TLambdaToTB,
    /// `Hom_Λ(X, X') -> Hom(T_Λ X, Z_Λ X')`, `g -> ([g 0], 0)`.
    TLambdaToZLambda,
    /// `Hom_Λ(X, X' ⊕ I ⊗ X') -> Hom(T_Λ X, T_Λ X')`.
    TLambdaToTLambda,
    /// `Hom_B(Y, M ⊗ X) -> Hom(T_B Y, T_Λ X)`, `h -> (ψ_X (1 ⊗ h), h)`.
    TBToTLambda,
    /// `Hom_B(Y, Y') -> Hom(T_B Y, T_B Y')`, `t -> (1 ⊗ t, t)`.
    TBToTB,
    /// `Hom_B(Y, Y') -> Hom(T_B Y, Z_B Y')`, `t -> (0, t)`.
    TBToZB,
    /// `Hom(T_B Y, Z_Λ X) = Hom(T_Λ X, Z_B Y) = 0`.
    CrossVanishing,
}

impl HomIdentity {
    pub const ALL: [HomIdentity; 10] = [
        HomIdentity::ExtendedToInflated,
        HomIdentity::IntoExtendedIdeal,
        HomIdentity::ExtendedToExtended,
        HomIdentity::TLambdaToTB,
        HomIdentity::TLambdaToZLambda,
        HomIdentity::TLambdaToTLambda,
        HomIdentity::TBToTLambda,
        HomIdentity::TBToTB,
        HomIdentity::TBToZB,
        HomIdentity::CrossVanishing,
    ];

    pub fn injective_only(self) -> bool {
        self == HomIdentity::IntoExtendedIdeal
    }
}

/// Inputs: `Λ`-modules `x, x2` and `B`-modules `y, y2`.
#[derive(Clone, Debug)]
pub struct HomInputs {
    pub x: FDModule,
    pub x2: FDModule,
    pub y: FDModule,
    pub y2: FDModule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomIsoReport {
    pub identity: HomIdentity,
    pub source_dim: usize,
    pub target_dim: usize,
    pub image_rank: usize,
    /// Every image lies in the target Hom space.
    pub images_are_homs: bool,
}

impl HomIsoReport {
    pub fn holds(&self) -> bool {
        if self.identity == HomIdentity::CrossVanishing {
            return self.source_dim == 0 && self.target_dim == 0;
        }
        self.images_are_homs
            && self.image_rank == self.source_dim
            && (self.identity.injective_only() || self.image_rank == self.target_dim)
    }
}

fn report(identity: HomIdentity, source: &HomSpace, target: &HomSpace, images: Vec<Mat>) -> HomIsoReport {
    let f = target.basis_matrix().field();
    let tb = target.basis_matrix();
    let vec_imgs: Vec<Mat> = images.iter().map(|m| m.vectorize()).collect();
    let im = Mat::from_cols(f, tb.rows(), &vec_imgs);
    let joint = Mat::hstack(&[&tb, &im]).rank();
    HomIsoReport {
        identity,
        source_dim: source.dim(),
        target_dim: target.dim(),
        image_rank: im.rank(),
        images_are_homs: joint == target.dim(),
    }
}

fn quad_space(s: &QuadrupleModule, t: &QuadrupleModule) -> Result<HomSpace> {
    s.hom_space(t)
}

fn pair(alpha: Mat, beta: Mat) -> Mat {
    alpha.direct_sum(&beta)
}

/// Realize the chosen identification on a basis of its source and verify it.
pub fn verify_hom_identity(
    ext: &TrivialExtension,
    ctx: &Arc<MoritaContext>,
    which: HomIdentity,
    inp: &HomInputs,
) -> Result<HomIsoReport> {
    let f = ctx.field();
    let HomInputs { x, x2, y, y2 } = inp;
    let ext_x = || ext.extended(x);
    let ext_x2 = || ext.extended(x2);
    Ok(match which {
        HomIdentity::ExtendedToInflated => {
            let src = hom_space(x, x2)?;
            let xi = ext_x()?;
            let tgt = hom_space(&xi.module, &ext.inflate(x2))?;
            let dix = xi.ix.module.dim();
            let imgs = src.homs().iter().map(|h| Mat::hstack(&[&h.mat, &Mat::zero(f, x2.dim(), dix)])).collect();
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::IntoExtendedIdeal => {
            let xi2 = ext_x2()?;
            let src = hom_space(x, &xi2.ix.module)?;
            let tgt = hom_space(&ext.inflate(x), &xi2.module)?;
            let imgs = src.homs().iter().map(|h| Mat::vstack(&[&Mat::zero(f, x2.dim(), x.dim()), &h.mat])).collect();
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::ExtendedToExtended | HomIdentity::TLambdaToTLambda => {
            let xi = ext_x()?;
            let xi2 = ext_x2()?;
            let src = hom_space(x, &x2.direct_sum(&xi2.ix.module))?;
            let d2 = x2.dim();
            let m_l = ext.restrict_right(&ctx.m);
            let (mx, mx2) = (tensor_over(&m_l, x)?, tensor_over(&m_l, x2)?);
            let mut imgs = Vec::with_capacity(src.dim());
            for h in src.homs() {
                let a = h.mat.block(0, d2, 0, x.dim());
                let c = h.mat.block(d2, h.mat.rows(), 0, x.dim());
                let ah = ModuleHom::new_unchecked(x.clone(), x2.clone(), a.clone());
                let one_i = tensor_map_between(&ext.ideal, &xi.ix, &xi2.ix, &ah);
                let mut m = Mat::zero(f, xi2.module.dim(), xi.module.dim());
                m.put(0, 0, &a);
                m.put(d2, 0, &c);
                m.put(d2, x.dim(), &one_i.mat);
                if which == HomIdentity::TLambdaToTLambda {
                    let one_m = tensor_map_between(&m_l, &mx, &mx2, &ah);
                    m = pair(m, one_m.mat);
                }
                imgs.push(m);
            }
            let tgt = if which == HomIdentity::ExtendedToExtended {
                hom_space(&xi.module, &xi2.module)?
            } else {
                quad_space(&t_lambda(ext, ctx, x)?, &t_lambda(ext, ctx, x2)?)?
            };
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::TLambdaToTB => {
            let tl = t_lambda(ext, ctx, x)?;
            let tb = t_b(ctx, y)?;
            let src = hom_space(x, &ext.restrict(&tb.x))?;
            let tgt = quad_space(&tl, &tb)?;
            let dix = tl.x.dim() - x.dim();
            let imgs = src
                .homs()
                .iter()
                .map(|h| pair(Mat::hstack(&[&h.mat, &Mat::zero(f, tb.x.dim(), dix)]), Mat::zero(f, tb.y.dim(), tl.y.dim())))
                .collect();
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::TLambdaToZLambda => {
            let tl = t_lambda(ext, ctx, x)?;
            let z = z_a(ctx, &ext.inflate(x2))?;
            let src = hom_space(x, x2)?;
            let tgt = quad_space(&tl, &z)?;
            let dix = tl.x.dim() - x.dim();
            let imgs = src
                .homs()
                .iter()
                .map(|h| pair(Mat::hstack(&[&h.mat, &Mat::zero(f, x2.dim(), dix)]), Mat::zero(f, 0, tl.y.dim())))
                .collect();
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::TBToTLambda => {
            let tl = t_lambda(ext, ctx, x)?;
            let tb = t_b(ctx, y)?;
            let src = hom_space(y, &tl.y)?;
            let tgt = quad_space(&tb, &tl)?;
            let ny = tensor_over(&ctx.n, y)?;
            let imgs = src
                .homs()
                .iter()
                .map(|h| {
                    let one_h = tensor_map_between(&ctx.n, &ny, &tl.ny, h);
                    pair(tl.g.mat.matmul(&one_h.mat), h.mat.clone())
                })
                .collect();
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::TBToTB => {
            let (tb, tb2) = (t_b(ctx, y)?, t_b(ctx, y2)?);
            let src = hom_space(y, y2)?;
            let tgt = quad_space(&tb, &tb2)?;
            let imgs = src
                .homs()
                .iter()
                .map(|h| pair(tensor_map_between(&ctx.n, &tb.ny, &tb2.ny, h).mat, h.mat.clone()))
                .collect();
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::TBToZB => {
            let tb = t_b(ctx, y)?;
            let z = z_b(ctx, y2)?;
            let src = hom_space(y, y2)?;
            let tgt = quad_space(&tb, &z)?;
            let imgs = src.homs().iter().map(|h| pair(Mat::zero(f, 0, tb.x.dim()), h.mat.clone())).collect();
            report(which, &src, &tgt, imgs)
        }
        HomIdentity::CrossVanishing => {
            let tl = t_lambda(ext, ctx, x)?;
            let tb = t_b(ctx, y)?;
            let zl = z_a(ctx, &ext.inflate(x))?;
            let zb = z_b(ctx, y)?;
            let first = quad_space(&tb, &zl)?;
            let second = quad_space(&tl, &zb)?;
            HomIsoReport {
                identity: which,
                source_dim: first.dim(),
                target_dim: second.dim(),
                image_rank: 0,
                images_are_homs: true,
            }
        }
    })
}

/// A right `Λ_(φ,ψ)`-module `(C, D, h, k)` with `h : C ⊗_A N -> D` and
/// `k : D ⊗_B M -> C`, read off a left quadruple over `ctx.opposite()`.
#[derive(Clone, Debug)]
pub struct RightQuadruple {
    /// Right `A`-module, as a module over `A^op`.
    pub c: FDModule,
    /// Right `B`-module, as a module over `B^op`.
    pub d: FDModule,
    /// `h` on `C ⊗_k N`, column `c * dim N + s` is `h(c ⊗ n_s)`.
    pub h_k: Mat,
    /// `k` on `D ⊗_k M`, column `d * dim M + i` is `k(d ⊗ m_i)`.
    pub k_k: Mat,
}

impl RightQuadruple {
    pub fn from_opposite(u: &QuadrupleModule) -> RightQuadruple {
        let ctx = u.ctx();
        let (dc, dd) = (u.x.dim(), u.y.dim());
        // Over the opposite context f lives on N ⊗ C and g on M ⊗ D.
        let h_k = super::context::transpose_pairs(&u.f_k(), ctx.m.dim(), dc);
        let k_k = super::context::transpose_pairs(&u.g_k(), ctx.n.dim(), dd);
        RightQuadruple { c: u.x.clone(), d: u.y.clone(), h_k, k_k }
    }
}

/// `U ⊗_{Λ_(φ,ψ)} V = (C ⊗_A X ⊕ D ⊗_B Y) / H` as a quotient of
/// `C ⊗_k X ⊕ D ⊗_k Y`.
pub fn tensor_over_morita(ctx: &MoritaContext, u: &RightQuadruple, v: &QuadrupleModule) -> Result<Quotient> {
    let f = ctx.field();
    if u.c.algebra().dim() != ctx.a.dim() || u.d.algebra().dim() != ctx.b.dim() {
        return Err(Error::AlgebraMismatch("right quadruple over a different context".into()));
    }
    let (dc, dd, dx, dy) = (u.c.dim(), u.d.dim(), v.x.dim(), v.y.dim());
    let (dn, dm) = (ctx.n.dim(), ctx.m.dim());
    let n1 = dc * dx;
    let total = n1 + dd * dy;
    let mut rels: Vec<Mat> = Vec::new();

    let bal_a = balance_relations(&ctx.a, u.c.actions(), dc, v.x.actions(), dx);
    for j in 0..bal_a.cols() {
        rels.push(Mat::vstack(&[&bal_a.col(j), &Mat::zero(f, dd * dy, 1)]));
    }
    let bal_b = balance_relations(&ctx.b, u.d.actions(), dd, v.y.actions(), dy);
    for j in 0..bal_b.cols() {
        rels.push(Mat::vstack(&[&Mat::zero(f, n1, 1), &bal_b.col(j)]));
    }

    let gk = v.g_k();
    let fk = v.f_k();
    for c in 0..dc {
        let ec = Mat::unit(f, dc, c);
        for s in 0..dn {
            let hc = u.h_k.col(c * dn + s);
            for y in 0..dy {
                let left = ec.tensor_k(&gk.col(s * dy + y));
                let right = hc.tensor_k(&Mat::unit(f, dy, y));
                rels.push(Mat::vstack(&[&left, &right.neg()]));
            }
        }
    }
    for d in 0..dd {
        let ed = Mat::unit(f, dd, d);
        for i in 0..dm {
            let kd = u.k_k.col(d * dm + i);
            for x in 0..dx {
                let left = kd.tensor_k(&Mat::unit(f, dx, x));
                let right = ed.tensor_k(&fk.col(i * dx + x));
                rels.push(Mat::vstack(&[&left.neg(), &right]));
            }
        }
    }
    Ok(Quotient::new(f, total, &Mat::from_cols(f, total, &rels)))
}
