//! Trivial extensions `A = Λ ⋉ I`, the functor `T_Λ`, and the comparison
//! maps used by the criterion (`η_Y`, `θ_X`, `m_X`).

use std::sync::Arc;

use crate::algebra::{validate_algebra, Algebra, FDModule, ModuleHom};
use crate::bimodule::{tensor_map_between, tensor_over, Bimodule, TensorModule};
use crate::error::{Error, Result};
use crate::linalg::Mat;

use super::functors::t_a;
use super::{MoritaContext, QuadrupleHom, QuadrupleModule};

/// `A = Λ ⋉ I` together with its bookkeeping maps. In `A`'s basis, `incl`
/// spans `Λ` and `ideal_basis` spans `I`; `proj` and `ideal_coords` are the
/// matching coordinate maps.
#[derive(Clone, Debug)]
pub struct TrivialExtension {
    pub lambda: Arc<Algebra>,
    pub ideal: Bimodule,
    pub algebra: Arc<Algebra>,
    pub incl: Mat,
    pub ideal_basis: Mat,
    pub proj: Mat,
    pub ideal_coords: Mat,
}

/// Build `Λ ⋉ I` on the basis `(Λ basis, I basis)`.
pub fn trivial_extension(lambda: &Arc<Algebra>, ideal: &Bimodule) -> Result<TrivialExtension> {
    if !crate::algebra::same_alg(ideal.left_algebra(), lambda) || !crate::algebra::same_alg(ideal.right_algebra(), lambda) {
        return Err(Error::AlgebraMismatch("I is not a bimodule over Λ".into()));
    }
    ideal.validate()?;
    let f = lambda.field();
    let (dl, di) = (lambda.dim(), ideal.dim());
    let d = dl + di;
    let mut left = Vec::with_capacity(d);
    for p in 0..dl {
        let mut l = Mat::zero(f, d, d);
        l.put(0, 0, lambda.left(p));
        l.put(dl, dl, ideal.left_action(p));
        left.push(l);
    }
    for r in 0..di {
        let mut l = Mat::zero(f, d, d);
        let cols: Vec<Mat> = (0..dl).map(|q| ideal.right_action(q).col(r)).collect();
        l.put(dl, 0, &Mat::from_cols(f, di, &cols));
        left.push(l);
    }
    let unit = Mat::vstack(&[lambda.unit(), &Mat::zero(f, di, 1)]);
    let a = Algebra::from_left_unchecked(f, left, unit);
    validate_algebra(&a).map_err(|v| Error::Verification(format!("trivial extension is not associative: {v}")))?;
    let incl = Mat::vstack(&[&Mat::identity(f, dl), &Mat::zero(f, di, dl)]);
    let ideal_basis = Mat::vstack(&[&Mat::zero(f, dl, di), &Mat::identity(f, di)]);
    Ok(TrivialExtension {
        lambda: lambda.clone(),
        ideal: ideal.clone(),
        algebra: Arc::new(a),
        proj: incl.transpose(),
        ideal_coords: ideal_basis.transpose(),
        incl,
        ideal_basis,
    })
}

/// `A = A ⋉ 0`, for contexts with `ψ = 0`.
pub fn zero_ideal_extension(a: &Arc<Algebra>) -> TrivialExtension {
    let f = a.field();
    let d = a.dim();
    TrivialExtension {
        lambda: a.clone(),
        ideal: Bimodule::zero(a, a),
        algebra: a.clone(),
        incl: Mat::identity(f, d),
        ideal_basis: Mat::zero(f, d, 0),
        proj: Mat::identity(f, d),
        ideal_coords: Mat::zero(f, 0, d),
    }
}

/// Recognize `A` as `Λ ⋉ I` for given spans of `Λ` and `I` (as columns).
pub fn recognize_trivial_extension(a: &Arc<Algebra>, lam: &Mat, ib: &Mat) -> Result<TrivialExtension> {
    let f = a.field();
    let (dl, di) = (lam.cols(), ib.cols());
    let p = Mat::hstack(&[lam, ib]);
    let Some(pinv) = p.inverse() else {
        return Err(Error::Precondition("the spans of Λ and I are not complementary".into()));
    };
    let proj = pinv.block(0, dl, 0, a.dim());
    let ideal_coords = pinv.block(dl, dl + di, 0, a.dim());
    let unit_i = ideal_coords.matmul(a.unit());
    if !unit_i.is_zero() {
        return Err(Error::Precondition("1 does not lie in Λ".into()));
    }
    let mut left = Vec::with_capacity(dl);
    for s in 0..dl {
        let mut cols = Vec::with_capacity(dl);
        for t in 0..dl {
            let prod = a.mul(&lam.col(s), &lam.col(t));
            if !ideal_coords.matmul(&prod).is_zero() {
                return Err(Error::Precondition(format!("Λ is not closed: product of basis elements {s} and {t}")));
            }
            cols.push(proj.matmul(&prod));
        }
        left.push(Mat::from_cols(f, dl, &cols));
    }
    if !a.is_ideal(ib) {
        return Err(Error::Precondition("I is not a two-sided ideal".into()));
    }
    for r in 0..di {
        for t in 0..di {
            if !a.mul(&ib.col(r), &ib.col(t)).is_zero() {
                return Err(Error::Precondition(format!("I^2 is nonzero: product of basis elements {r} and {t}")));
            }
        }
    }
    let lambda = Arc::new(Algebra::from_left_unchecked(f, left, proj.matmul(a.unit())));
    validate_algebra(&lambda).map_err(|v| Error::Verification(format!("recognized Λ is not an algebra: {v}")))?;
    let act = |side_left: bool, s: usize| -> Mat {
        let cols: Vec<Mat> = (0..di)
            .map(|r| {
                let prod = if side_left { a.mul(&lam.col(s), &ib.col(r)) } else { a.mul(&ib.col(r), &lam.col(s)) };
                ideal_coords.matmul(&prod)
            })
            .collect();
        Mat::from_cols(f, di, &cols)
    };
    let ideal = Bimodule::new_unchecked(
        lambda.clone(),
        lambda.clone(),
        di,
        (0..dl).map(|s| act(true, s)).collect(),
        (0..dl).map(|s| act(false, s)).collect(),
    );
    Ok(TrivialExtension { lambda, ideal, algebra: a.clone(), incl: lam.clone(), ideal_basis: ib.clone(), proj, ideal_coords })
}

/// `X(I) = X ⊕ I ⊗_Λ X` as an `A`-module.
#[derive(Clone, Debug)]
pub struct ExtendedModule {
    pub module: FDModule,
    pub base: FDModule,
    pub ix: TensorModule,
}

impl TrivialExtension {
    pub fn dim_lambda(&self) -> usize {
        self.lambda.dim()
    }

    pub fn dim_ideal(&self) -> usize {
        self.ideal_basis.cols()
    }

    /// Restrict an `A`-module to `Λ`.
    pub fn restrict(&self, x: &FDModule) -> FDModule {
        x.restrict(&self.lambda, &self.incl)
    }

    /// Regard a `Λ`-module as an `A`-module with `I` acting by zero.
    pub fn inflate(&self, x: &FDModule) -> FDModule {
        x.restrict(&self.algebra, &self.proj)
    }

    /// `(B, Λ)`-bimodule to `(B, A)` through `π`.
    pub fn inflate_right(&self, m: &Bimodule) -> Bimodule {
        let b = m.left_algebra().clone();
        m.restrict(&b, &Mat::identity(b.field(), b.dim()), &self.algebra, &self.proj)
    }

    /// `(Λ, B)`-bimodule to `(A, B)` through `π`.
    pub fn inflate_left(&self, n: &Bimodule) -> Bimodule {
        let b = n.right_algebra().clone();
        n.restrict(&self.algebra, &self.proj, &b, &Mat::identity(b.field(), b.dim()))
    }

    /// `(B, A)`-bimodule restricted on the right to `Λ`.
    pub fn restrict_right(&self, m: &Bimodule) -> Bimodule {
        let b = m.left_algebra().clone();
        m.restrict(&b, &Mat::identity(b.field(), b.dim()), &self.lambda, &self.incl)
    }

    /// `(A, B)`-bimodule restricted on the left to `Λ`.
    pub fn restrict_left(&self, n: &Bimodule) -> Bimodule {
        let b = n.right_algebra().clone();
        n.restrict(&self.lambda, &self.incl, &b, &Mat::identity(b.field(), b.dim()))
    }

    /// `X(I) = X ⊕ I ⊗_Λ X` with `(λ, i)(x, j ⊗ x') = (λx, i ⊗ x + λj ⊗ x')`.
    pub fn extended(&self, x: &FDModule) -> Result<ExtendedModule> {
        let f = x.field();
        let ix = tensor_over(&self.ideal, x)?;
        let (dx, dix) = (x.dim(), ix.module.dim());
        let id_x = Mat::identity(f, dx);
        let e: Vec<Mat> = (0..self.dim_ideal())
            .map(|r| ix.tensor.proj().matmul(&Mat::unit(f, self.dim_ideal(), r).tensor_k(&id_x)))
            .collect();
        let action = (0..self.algebra.dim())
            .map(|k| {
                let lam = self.proj.col(k);
                let iota = self.ideal_coords.col(k);
                let mut low = Mat::zero(f, dix, dx);
                for (r, er) in e.iter().enumerate() {
                    if !iota.entry_is_zero(r, 0) {
                        low = low.add(&er.scale(&iota.get(r, 0)));
                    }
                }
                let mut a = Mat::zero(f, dx + dix, dx + dix);
                a.put(0, 0, &x.act_by(&lam));
                a.put(dx, 0, &low);
                a.put(dx, dx, &ix.module.act_by(&lam));
                a
            })
            .collect();
        Ok(ExtendedModule { module: FDModule::new_unchecked(self.algebra.clone(), dx + dix, action), base: x.clone(), ix })
    }

    /// Morita context `(A, B, M, N, 0, ψ)` from `Λ`-level bimodules and
    /// `ψ` with values in `I` (`dim I x (dim N * dim M)`).
    pub fn psi_context(&self, b: &Arc<Algebra>, m: &Bimodule, n: &Bimodule, psi_i: &Mat) -> Result<Arc<MoritaContext>> {
        let m_a = self.inflate_right(m);
        let n_a = self.inflate_left(n);
        let psi = self.ideal_basis.matmul(psi_i);
        let phi = Mat::zero(b.field(), b.dim(), m.dim() * n.dim());
        MoritaContext::new(self.algebra.clone(), b.clone(), m_a, n_a, phi, psi)
    }

    /// Preconditions shared by everything that combines an extension with
    /// a context: `φ = 0`, `A` is this algebra, and `Im ψ = I`.
    pub fn check_context(&self, ctx: &MoritaContext) -> Result<()> {
        if !ctx.phi_is_zero() {
            return Err(Error::Precondition("phi must be zero".into()));
        }
        if !crate::algebra::same_alg(&ctx.a, &self.algebra) {
            return Err(Error::Precondition("context algebra A differs from the extension".into()));
        }
        let ib = ctx.i_basis();
        let joint = Mat::hstack(&[ib, &self.ideal_basis]).rank();
        if joint != ib.cols() || joint != self.ideal_basis.cols() {
            return Err(Error::Precondition("image of psi differs from the ideal I of the extension".into()));
        }
        Ok(())
    }
}

/// `T_Λ(X) = (X(I), M ⊗_Λ X, π_X, ψ_X)`.
pub fn t_lambda(ext: &TrivialExtension, ctx: &Arc<MoritaContext>, x: &FDModule) -> Result<QuadrupleModule> {
    ext.check_context(ctx)?;
    let f = ctx.field();
    let xi = ext.extended(x)?;
    let m_l = ext.restrict_right(&ctx.m);
    let mlx = tensor_over(&m_l, x)?;
    let (dm, dn, dx, dxi) = (ctx.m.dim(), ctx.n.dim(), x.dim(), xi.module.dim());
    let y = mlx.module.clone();

    let mx = tensor_over(&ctx.m, &xi.module)?;
    let fk_cols: Vec<Mat> = (0..dm * dxi)
        .map(|sj| {
            let (s, j) = (sj / dxi, sj % dxi);
            if j < dx {
                mlx.tensor.proj().col(s * dx + j)
            } else {
                Mat::zero(f, y.dim(), 1)
            }
        })
        .collect();
    let fmat = Mat::from_cols(f, y.dim(), &fk_cols).matmul(mx.tensor.lift());

    let ny = tensor_over(&ctx.n, &y)?;
    let id_x = Mat::identity(f, dx);
    let blocks: Vec<Mat> = (0..dn)
        .flat_map(|s| (0..dm).map(move |i| (s, i)))
        .map(|(s, i)| {
            let rho = ext.ideal_coords.matmul(&ctx.psi.eval(s, i));
            Mat::vstack(&[&Mat::zero(f, dx, dx), &xi.ix.tensor.proj().matmul(&rho.tensor_k(&id_x))])
        })
        .collect();
    let w = if blocks.is_empty() { Mat::zero(f, dxi, 0) } else { Mat::hstack(&blocks.iter().collect::<Vec<_>>()) };
    let gmat = super::quadruple::through(&w, dn, &mlx.tensor, &ny.tensor);
    QuadrupleModule::new(ctx, xi.module, y, fmat, gmat)
}

/// `T_Λ(α) = (α ⊕ (1_I ⊗ α), 1_M ⊗ α)`.
pub fn t_lambda_hom(ext: &TrivialExtension, ctx: &Arc<MoritaContext>, h: &ModuleHom) -> Result<QuadrupleHom> {
    let s = t_lambda(ext, ctx, &h.source)?;
    let t = t_lambda(ext, ctx, &h.target)?;
    let xs = ext.extended(&h.source)?;
    let xt = ext.extended(&h.target)?;
    let one_i = tensor_map_between(&ext.ideal, &xs.ix, &xt.ix, h);
    let m_l = ext.restrict_right(&ctx.m);
    let ms = tensor_over(&m_l, &h.source)?;
    let mt = tensor_over(&m_l, &h.target)?;
    let one_m = tensor_map_between(&m_l, &ms, &mt, h);
    QuadrupleHom::new(&s, &t, h.mat.direct_sum(&one_i.mat), one_m.mat)
}

/// The natural isomorphism `T_Λ(X) -> T_A(A ⊗_Λ X)`, verified.
pub fn t_lambda_iso(ext: &TrivialExtension, ctx: &Arc<MoritaContext>, x: &FDModule) -> Result<QuadrupleHom> {
    let f = ctx.field();
    let tl = t_lambda(ext, ctx, x)?;
    let xi = ext.extended(x)?;
    let a_l = Bimodule::regular(&ext.algebra).restrict(
        &ext.algebra,
        &Mat::identity(f, ext.algebra.dim()),
        &ext.lambda,
        &ext.incl,
    );
    let ax = tensor_over(&a_l, x)?;
    let id_x = Mat::identity(f, x.dim());
    let on_x = ax.tensor.proj().matmul(&ext.algebra.unit().tensor_k(&id_x));
    let on_ix = ax.tensor.proj().matmul(&ext.ideal_basis.tensor_k(&id_x)).matmul(xi.ix.tensor.lift());
    let alpha = Mat::hstack(&[&on_x, &on_ix]);
    let ta = t_a(ctx, &ax.module)?;
    let pi_inv = tl.f.inverse().ok_or_else(|| Error::Verification("π_X is not invertible".into()))?;
    let alpha_h = ModuleHom::new_unchecked(tl.x.clone(), ta.x.clone(), alpha.clone());
    let one_a = tensor_map_between(&ctx.m, &tl.mx, &ta.mx, &alpha_h);
    let beta = one_a.mat.matmul(&pi_inv.mat);
    let h = QuadrupleHom::new(&tl, &ta, alpha, beta)?;
    if !h.is_iso() {
        return Err(Error::Verification("T_Λ(X) -> T_A(A ⊗ X) is not invertible".into()));
    }
    Ok(h)
}

/// `I = Im ψ` as an `A`-`A`-bimodule.
pub fn ideal_bimodule(ctx: &MoritaContext) -> Result<Bimodule> {
    Ok(Bimodule::regular(&ctx.a).sub(ctx.i_basis())?.0)
}

/// `ψ ⊗ 1_U : N ⊗_B (M ⊗_A U) -> I ⊗_A U` in quotient coordinates.
pub(crate) fn psi_tensor_one(
    ctx: &MoritaContext,
    u: &FDModule,
    mu: &TensorModule,
    nmu: &TensorModule,
    iu: &TensorModule,
) -> Result<Mat> {
    let f = ctx.field();
    let ib = ctx.i_basis();
    let coords = ib.left_inverse().ok_or_else(|| Error::Verification("dependent ideal basis".into()))?;
    let id_u = Mat::identity(f, u.dim());
    let (dn, dm) = (ctx.n.dim(), ctx.m.dim());
    let blocks: Vec<Mat> = (0..dn)
        .flat_map(|s| (0..dm).map(move |i| (s, i)))
        .map(|(s, i)| iu.tensor.proj().matmul(&coords.matmul(&ctx.psi.eval(s, i)).tensor_k(&id_u)))
        .collect();
    let w = if blocks.is_empty() {
        Mat::zero(f, iu.module.dim(), 0)
    } else {
        Mat::hstack(&blocks.iter().collect::<Vec<_>>())
    };
    Ok(super::quadruple::through(&w, dn, &mu.tensor, &nmu.tensor))
}

/// The maps `λ_X, μ_Y, η_Y, θ_X, m_X, p_X, mlt_X` of a quadruple over
/// `Λ_ψ`.
#[derive(Clone, Debug)]
pub struct StructuralMaps {
    /// `X -> U = Coker g`.
    pub lambda_x: ModuleHom,
    /// `Y -> V = Coker f`.
    pub mu_y: ModuleHom,
    /// `M ⊗ U -> Y` with `f = η_Y (1 ⊗ λ_X)`.
    pub eta_y: ModuleHom,
    /// `N ⊗ V -> X / IX` with `p_X g = θ_X (1 ⊗ μ_Y)`.
    pub theta_x: ModuleHom,
    /// `I ⊗ U -> X` with `mlt_X = m_X (1 ⊗ λ_X)`.
    pub m_x: ModuleHom,
    pub p_x: ModuleHom,
    pub mlt_x: ModuleHom,
    /// `I X` as a basis in `X`.
    pub ix_basis: Mat,
}

pub fn structural_maps(ctx: &Arc<MoritaContext>, q: &QuadrupleModule) -> Result<StructuralMaps> {
    if !ctx.phi_is_zero() {
        return Err(Error::Precondition("phi must be zero".into()));
    }
    let f = ctx.field();
    let fail = |what: &str| Error::Verification(format!("{what} does not factor"));
    let (u, lambda_x) = q.g.cokernel();
    let (v, mu_y) = q.f.cokernel();

    let mu = tensor_over(&ctx.m, &u)?;
    let one_lambda = tensor_map_between(&ctx.m, &q.mx, &mu, &lambda_x);
    let eta_y = q.f.factor_through_epi(&one_lambda).ok_or_else(|| fail("f"))?;

    let ix_basis = q.x.ideal_times(ctx.i_basis());
    let (xq, p_x) = q.x.quotient(&ix_basis);
    let nv = tensor_over(&ctx.n, &v)?;
    let one_mu = tensor_map_between(&ctx.n, &q.ny, &nv, &mu_y);
    let pg = ModuleHom::new_unchecked(q.ny.module.clone(), xq, p_x.mat.matmul(&q.g.mat));
    let theta_x = pg.factor_through_epi(&one_mu).ok_or_else(|| fail("p_X g"))?;

    let ibim = ideal_bimodule(ctx)?;
    let ixm = tensor_over(&ibim, &q.x)?;
    let iu = tensor_over(&ibim, &u)?;
    let ib = ctx.i_basis();
    let cols: Vec<Mat> = (0..ib.cols()).map(|r| q.x.act_by(&ib.col(r))).collect();
    let w = if cols.is_empty() { Mat::zero(f, q.x.dim(), 0) } else { Mat::hstack(&cols.iter().collect::<Vec<_>>()) };
    let mlt_x = ModuleHom::new_unchecked(ixm.module.clone(), q.x.clone(), w.matmul(ixm.tensor.lift()));
    let one_lambda_i = tensor_map_between(&ibim, &ixm, &iu, &lambda_x);
    let m_x = mlt_x.factor_through_epi(&one_lambda_i).ok_or_else(|| fail("mlt_X"))?;

    Ok(StructuralMaps { lambda_x, mu_y, eta_y, theta_x, m_x, p_x, mlt_x, ix_basis })
}

/// `I Coker(g) = 0` and `I Im(g) = 0`.
pub fn annihilation_identities(ctx: &MoritaContext, q: &QuadrupleModule) -> bool {
    let (u, _) = q.g.cokernel();
    let img = q.g.mat.image_basis();
    let i_img: Vec<Mat> = (0..ctx.i_basis().cols()).map(|r| q.x.act_by(&ctx.i_basis().col(r)).matmul(&img)).collect();
    u.ideal_times(ctx.i_basis()).cols() == 0 && i_img.iter().all(|m| m.is_zero())
}

/// Whether `Im g` is the pushout of `1_N ⊗ η_Y` and `ψ ⊗ 1_U`. Requires the
/// second and third isomorphism conditions, i.e. `θ_X` and `m_X` injective.
pub fn pushout_check(ctx: &Arc<MoritaContext>, q: &QuadrupleModule) -> Result<bool> {
    let sm = structural_maps(ctx, q)?;
    if !sm.theta_x.is_injective() {
        return Err(Error::Precondition("N ⊗ Coker f is not isomorphic to Im g / IX".into()));
    }
    if !sm.m_x.is_injective() {
        return Err(Error::Precondition("I ⊗ Coker g is not isomorphic to IX".into()));
    }
    let u = sm.lambda_x.target.clone();
    let mu = tensor_over(&ctx.m, &u)?;
    let nmu = tensor_over(&ctx.n, &mu.module)?;
    let ibim = ideal_bimodule(ctx)?;
    let iu = tensor_over(&ibim, &u)?;
    let one_eta = tensor_map_between(&ctx.n, &nmu, &q.ny, &sm.eta_y);
    let psi_u = psi_tensor_one(ctx, &u, &mu, &nmu, &iu)?;
    let rel = Mat::vstack(&[&one_eta.mat, &psi_u.neg()]);
    let dim_p = q.ny.module.dim() + iu.module.dim() - rel.rank();
    let c = Mat::hstack(&[&q.g.mat, &sm.m_x.mat]);
    if !c.matmul(&rel).is_zero() {
        return Err(Error::Verification("pushout square does not commute".into()));
    }
    let im_g = q.g.rank();
    Ok(c.rank() == im_g && c.rank() == dim_p)
}
