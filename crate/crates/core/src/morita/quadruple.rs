use std::sync::Arc;

use crate::algebra::{hom_space, FDModule, HomSpace, ModuleHom};
use crate::bimodule::{hom_module, tensor_map_between, tensor_over, HomModule, Tensor, TensorModule};
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;

use super::MoritaContext;

/// `W (1 ⊗ inner.lift) outer.lift` for `W` defined on `k`-triples
/// `(s, i, j)`, `s < d1`, pulled back to `V1 ⊗ (V2 ⊗ V3)` in quotient
/// coordinates.
pub(crate) fn through(w: &Mat, d1: usize, inner: &Tensor, outer: &Tensor) -> Mat {
    let f = w.field();
    w.matmul(&Mat::identity(f, d1).tensor_k(inner.lift())).matmul(outer.lift())
}

/// `Ψ_X : N ⊗_B (M ⊗_A X) -> X`, `n ⊗ m ⊗ x -> ψ(n ⊗ m) x`.
pub(crate) fn psi_matrix(ctx: &MoritaContext, x: &FDModule, mx: &TensorModule, nmx: &TensorModule) -> Mat {
    let (dn, dm) = (ctx.n.dim(), ctx.m.dim());
    let f = ctx.field();
    let blocks: Vec<Mat> = (0..dn).flat_map(|s| (0..dm).map(move |i| (s, i))).map(|(s, i)| x.act_by(&ctx.psi.eval(s, i))).collect();
    let w = if blocks.is_empty() {
        Mat::zero(f, x.dim(), 0)
    } else {
        Mat::hstack(&blocks.iter().collect::<Vec<_>>())
    };
    through(&w, dn, &mx.tensor, &nmx.tensor)
}

/// `Φ_Y : M ⊗_A (N ⊗_B Y) -> Y`, `m ⊗ n ⊗ y -> φ(m ⊗ n) y`.
pub(crate) fn phi_matrix(ctx: &MoritaContext, y: &FDModule, ny: &TensorModule, mny: &TensorModule) -> Mat {
    let (dn, dm) = (ctx.n.dim(), ctx.m.dim());
    let f = ctx.field();
    let blocks: Vec<Mat> = (0..dm).flat_map(|i| (0..dn).map(move |s| (i, s))).map(|(i, s)| y.act_by(&ctx.phi.eval(i, s))).collect();
    let w = if blocks.is_empty() {
        Mat::zero(f, y.dim(), 0)
    } else {
        Mat::hstack(&blocks.iter().collect::<Vec<_>>())
    };
    through(&w, dm, &ny.tensor, &mny.tensor)
}

/// A `Λ_(φ,ψ)`-module as `(X, Y, f, g)`. `f` and `g` are homs out of the
/// canonical tensor presentations `mx = M ⊗_A X` and `ny = N ⊗_B Y`.
#[derive(Clone, Debug)]
pub struct QuadrupleModule {
    ctx: Arc<MoritaContext>,
    pub x: FDModule,
    pub y: FDModule,
    pub f: ModuleHom,
    pub g: ModuleHom,
    pub mx: TensorModule,
    pub ny: TensorModule,
}

impl QuadrupleModule {
    pub fn new(ctx: &Arc<MoritaContext>, x: FDModule, y: FDModule, f: Mat, g: Mat) -> Result<QuadrupleModule> {
        let q = QuadrupleModule::new_unchecked(ctx, x, y, f, g)?;
        q.validate()?;
        Ok(q)
    }

    /// Build without checking the compatibility squares. Fails only on
    /// algebra mismatch.
    pub fn new_unchecked(ctx: &Arc<MoritaContext>, x: FDModule, y: FDModule, f: Mat, g: Mat) -> Result<QuadrupleModule> {
        let mx = tensor_over(&ctx.m, &x)?;
        let ny = tensor_over(&ctx.n, &y)?;
        if f.rows() != y.dim() || f.cols() != mx.module.dim() || g.rows() != x.dim() || g.cols() != ny.module.dim() {
            return invalid("quadruple maps have the wrong shape");
        }
        let f = ModuleHom::new_unchecked(mx.module.clone(), y.clone(), f);
        let g = ModuleHom::new_unchecked(ny.module.clone(), x.clone(), g);
        Ok(QuadrupleModule { ctx: ctx.clone(), x, y, f, g, mx, ny })
    }

    /// Build from maps on the `k`-tensor spaces `M ⊗_k X -> Y` and
    /// `N ⊗_k Y -> X`; they must be balanced.
    pub fn from_k_maps(ctx: &Arc<MoritaContext>, x: FDModule, y: FDModule, fk: &Mat, gk: &Mat) -> Result<QuadrupleModule> {
        let mx = tensor_over(&ctx.m, &x)?;
        let ny = tensor_over(&ctx.n, &y)?;
        let f = fk.matmul(mx.tensor.lift());
        let g = gk.matmul(ny.tensor.lift());
        if f.matmul(mx.tensor.proj()) != *fk || g.matmul(ny.tensor.proj()) != *gk {
            return invalid("quadruple maps are not balanced");
        }
        QuadrupleModule::new(ctx, x, y, f, g)
    }

    pub fn zero(ctx: &Arc<MoritaContext>) -> QuadrupleModule {
        QuadrupleModule::with_zero_maps(ctx, FDModule::zero(&ctx.a), FDModule::zero(&ctx.b)).expect("zero quadruple")
    }

    /// `(X, Y, 0, 0)`, not validated.
    pub fn with_zero_maps(ctx: &Arc<MoritaContext>, x: FDModule, y: FDModule) -> Result<QuadrupleModule> {
        let mx = tensor_over(&ctx.m, &x)?;
        let ny = tensor_over(&ctx.n, &y)?;
        let f = ctx.field();
        let fz = ModuleHom::new_unchecked(mx.module.clone(), y.clone(), Mat::zero(f, y.dim(), mx.module.dim()));
        let gz = ModuleHom::new_unchecked(ny.module.clone(), x.clone(), Mat::zero(f, x.dim(), ny.module.dim()));
        Ok(QuadrupleModule { ctx: ctx.clone(), x, y, f: fz, g: gz, mx, ny })
    }

    pub fn ctx(&self) -> &Arc<MoritaContext> {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.x.dim() + self.y.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// `f` on `M ⊗_k X`.
    pub fn f_k(&self) -> Mat {
        self.f.mat.matmul(self.mx.tensor.proj())
    }

    /// `g` on `N ⊗_k Y`.
    pub fn g_k(&self) -> Mat {
        self.g.mat.matmul(self.ny.tensor.proj())
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = &self.ctx;
        self.x.validate()?;
        self.y.validate()?;
        if !crate::algebra::same_alg(self.x.algebra(), &ctx.a) || !crate::algebra::same_alg(self.y.algebra(), &ctx.b) {
            return Err(Error::AlgebraMismatch("quadruple components over the wrong algebras".into()));
        }
        if !self.f.intertwines() {
            return invalid("f is not B-linear");
        }
        if !self.g.intertwines() {
            return invalid("g is not A-linear");
        }
        let nmx = tensor_over(&ctx.n, &self.mx.module)?;
        let one_f = tensor_map_between(&ctx.n, &nmx, &self.ny, &self.f);
        if self.g.mat.matmul(&one_f.mat) != psi_matrix(ctx, &self.x, &self.mx, &nmx) {
            return invalid("g (1 ⊗ f) differs from the multiplication through psi");
        }
        let mny = tensor_over(&ctx.m, &self.ny.module)?;
        let one_g = tensor_map_between(&ctx.m, &mny, &self.mx, &self.g);
        if self.f.mat.matmul(&one_g.mat) != phi_matrix(ctx, &self.y, &self.ny, &mny) {
            return invalid("f (1 ⊗ g) differs from the multiplication through phi");
        }
        Ok(())
    }

    /// The `Λ_(φ,ψ)`-module on `X ⊕ Y`.
    pub fn to_module(&self) -> Result<FDModule> {
        let ring = self.ctx.ring()?;
        let f = self.ctx.field();
        let (dx, dy) = (self.x.dim(), self.y.dim());
        let d = dx + dy;
        let [da, dn, dm, db] = ring.dims;
        let mut action = Vec::with_capacity(ring.dim());
        for p in 0..da {
            let mut a = Mat::zero(f, d, d);
            a.put(0, 0, self.x.action(p));
            action.push(a);
        }
        let gk = self.g_k();
        for s in 0..dn {
            let mut a = Mat::zero(f, d, d);
            if dx > 0 && dy > 0 {
                a.put(0, dx, &gk.block(0, dx, s * dy, (s + 1) * dy));
            }
            action.push(a);
        }
        let fk = self.f_k();
        for i in 0..dm {
            let mut a = Mat::zero(f, d, d);
            if dx > 0 && dy > 0 {
                a.put(dx, 0, &fk.block(0, dy, i * dx, (i + 1) * dx));
            }
            action.push(a);
        }
        for q in 0..db {
            let mut a = Mat::zero(f, d, d);
            a.put(dx, dx, self.y.action(q));
            action.push(a);
        }
        Ok(FDModule::new_unchecked(ring.ring.clone(), d, action))
    }

    /// Quadruple of a `Λ_(φ,ψ)`-module, with `X = e1 V` and `Y = e2 V`.
    /// Returns the change of basis `P = [basis of X | basis of Y]`: the
    /// module of the quadruple is `V` transported along `P`.
    pub fn from_module(ctx: &Arc<MoritaContext>, v: &FDModule) -> Result<(QuadrupleModule, Mat)> {
        let ring = ctx.ring()?;
        if !crate::algebra::same_alg(v.algebra(), &ring.ring) {
            return Err(Error::AlgebraMismatch("module is not over the Morita ring".into()));
        }
        let f = ctx.field();
        let xb = v.act_by(&ring.e1).image_basis();
        let yb = v.act_by(&ring.e2).image_basis();
        let p = Mat::hstack(&[&xb, &yb]);
        let Some(pinv) = p.inverse() else { return Err(Error::Verification("e1 V + e2 V is not V".into())) };
        let (dx, dy) = (xb.cols(), yb.cols());
        let local = |i: usize| pinv.matmul(&v.action(i)).matmul(&p);
        let [da, dn, dm, db] = ring.dims;
        let x = FDModule::new_unchecked(ctx.a.clone(), dx, (0..da).map(|i| local(i).block(0, dx, 0, dx)).collect());
        let y = FDModule::new_unchecked(
            ctx.b.clone(),
            dy,
            (0..db).map(|i| local(da + dn + dm + i).block(dx, dx + dy, dx, dx + dy)).collect(),
        );
        let fk_parts: Vec<Mat> = (0..dm).map(|i| local(da + dn + i).block(dx, dx + dy, 0, dx)).collect();
        let gk_parts: Vec<Mat> = (0..dn).map(|s| local(da + s).block(0, dx, dx, dx + dy)).collect();
        let fk = if fk_parts.is_empty() { Mat::zero(f, dy, 0) } else { Mat::hstack(&fk_parts.iter().collect::<Vec<_>>()) };
        let gk = if gk_parts.is_empty() { Mat::zero(f, dx, 0) } else { Mat::hstack(&gk_parts.iter().collect::<Vec<_>>()) };
        let q = QuadrupleModule::from_k_maps(ctx, x, y, &fk, &gk)?;
        Ok((q, p))
    }

    pub fn direct_sum(&self, o: &QuadrupleModule) -> Result<QuadrupleModule> {
        let ctx = &self.ctx;
        let f = ctx.field();
        let x = self.x.direct_sum(&o.x);
        let y = self.y.direct_sum(&o.y);
        let (dx, dx2, dy, dy2) = (self.x.dim(), o.x.dim(), self.y.dim(), o.y.dim());
        let p1x = Mat::hstack(&[&Mat::identity(f, dx), &Mat::zero(f, dx, dx2)]);
        let p2x = Mat::hstack(&[&Mat::zero(f, dx2, dx), &Mat::identity(f, dx2)]);
        let p1y = Mat::hstack(&[&Mat::identity(f, dy), &Mat::zero(f, dy, dy2)]);
        let p2y = Mat::hstack(&[&Mat::zero(f, dy2, dy), &Mat::identity(f, dy2)]);
        let mx = tensor_over(&ctx.m, &x)?;
        let ny = tensor_over(&ctx.n, &y)?;
        let im = Mat::identity(f, ctx.m.dim());
        let inn = Mat::identity(f, ctx.n.dim());
        let fm = Mat::vstack(&[
            &self.f.mat.matmul(&mx.tensor.map_to(&self.mx.tensor, &im, &p1x)),
            &o.f.mat.matmul(&mx.tensor.map_to(&o.mx.tensor, &im, &p2x)),
        ]);
        let gm = Mat::vstack(&[
            &self.g.mat.matmul(&ny.tensor.map_to(&self.ny.tensor, &inn, &p1y)),
            &o.g.mat.matmul(&ny.tensor.map_to(&o.ny.tensor, &inn, &p2y)),
        ]);
        QuadrupleModule::new_unchecked(ctx, x, y, fm, gm)
    }

    /// `Hom` between quadruples, computed on the associated ring modules.
    pub fn hom_space(&self, o: &QuadrupleModule) -> Result<HomSpace> {
        hom_space(&self.to_module()?, &o.to_module()?)
    }

    /// Adjoint mate `f~ : X -> Hom_B(M, Y)`.
    pub fn f_tilde(&self) -> Result<(HomModule, ModuleHom)> {
        let hm = hom_module(&self.ctx.m, &self.y)?;
        let fk = self.f_k();
        let (dm, dx) = (self.ctx.m.dim(), self.x.dim());
        let cols: Vec<Mat> = (0..dx)
            .map(|j| {
                let h = Mat::from_cols(self.ctx.field(), self.y.dim(), &(0..dm).map(|i| fk.col(i * dx + j)).collect::<Vec<_>>());
                hm.coords_of(&h)
            })
            .collect();
        let mat = Mat::from_cols(self.ctx.field(), hm.module.dim(), &cols);
        let h = ModuleHom::new_unchecked(self.x.clone(), hm.module.clone(), mat);
        Ok((hm, h))
    }

    /// Adjoint mate `g~ : Y -> Hom_A(N, X)`.
    pub fn g_tilde(&self) -> Result<(HomModule, ModuleHom)> {
        let hm = hom_module(&self.ctx.n, &self.x)?;
        let gk = self.g_k();
        let (dn, dy) = (self.ctx.n.dim(), self.y.dim());
        let cols: Vec<Mat> = (0..dy)
            .map(|j| {
                let h = Mat::from_cols(self.ctx.field(), self.x.dim(), &(0..dn).map(|s| gk.col(s * dy + j)).collect::<Vec<_>>());
                hm.coords_of(&h)
            })
            .collect();
        let mat = Mat::from_cols(self.ctx.field(), hm.module.dim(), &cols);
        let h = ModuleHom::new_unchecked(self.y.clone(), hm.module.clone(), mat);
        Ok((hm, h))
    }
}

/// A morphism `(α, β)` of quadruples.
#[derive(Clone, Debug)]
pub struct QuadrupleHom {
    pub source: QuadrupleModule,
    pub target: QuadrupleModule,
    pub alpha: ModuleHom,
    pub beta: ModuleHom,
}

impl QuadrupleHom {
    pub fn new(source: &QuadrupleModule, target: &QuadrupleModule, alpha: Mat, beta: Mat) -> Result<QuadrupleHom> {
        let h = QuadrupleHom::new_unchecked(source, target, alpha, beta);
        h.validate()?;
        Ok(h)
    }

    pub fn new_unchecked(source: &QuadrupleModule, target: &QuadrupleModule, alpha: Mat, beta: Mat) -> QuadrupleHom {
        QuadrupleHom {
            source: source.clone(),
            target: target.clone(),
            alpha: ModuleHom::new_unchecked(source.x.clone(), target.x.clone(), alpha),
            beta: ModuleHom::new_unchecked(source.y.clone(), target.y.clone(), beta),
        }
    }

    pub fn identity(q: &QuadrupleModule) -> QuadrupleHom {
        let f = q.ctx.field();
        QuadrupleHom::new_unchecked(q, q, Mat::identity(f, q.x.dim()), Mat::identity(f, q.y.dim()))
    }

    pub fn zero(s: &QuadrupleModule, t: &QuadrupleModule) -> QuadrupleHom {
        let f = s.ctx.field();
        QuadrupleHom::new_unchecked(s, t, Mat::zero(f, t.x.dim(), s.x.dim()), Mat::zero(f, t.y.dim(), s.y.dim()))
    }

    /// From a hom of the associated ring modules (block diagonal).
    pub fn from_module_hom(source: &QuadrupleModule, target: &QuadrupleModule, m: &Mat) -> Result<QuadrupleHom> {
        let (dx, dy, tx, ty) = (source.x.dim(), source.y.dim(), target.x.dim(), target.y.dim());
        if m.rows() != tx + ty || m.cols() != dx + dy {
            return invalid("hom matrix has the wrong shape");
        }
        if !m.block(0, tx, dx, dx + dy).is_zero() || !m.block(tx, tx + ty, 0, dx).is_zero() {
            return invalid("hom does not preserve the corner decomposition");
        }
        QuadrupleHom::new(source, target, m.block(0, tx, 0, dx), m.block(tx, tx + ty, dx, dx + dy))
    }

    pub fn module_matrix(&self) -> Mat {
        self.alpha.mat.direct_sum(&self.beta.mat)
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = self.source.ctx();
        if !self.alpha.intertwines() || !self.beta.intertwines() {
            return invalid("alpha or beta is not a module hom");
        }
        let one_a = tensor_map_between(&ctx.m, &self.source.mx, &self.target.mx, &self.alpha);
        if self.beta.mat.matmul(&self.source.f.mat) != self.target.f.mat.matmul(&one_a.mat) {
            return invalid("beta f differs from f' (1 ⊗ alpha)");
        }
        let one_b = tensor_map_between(&ctx.n, &self.source.ny, &self.target.ny, &self.beta);
        if self.alpha.mat.matmul(&self.source.g.mat) != self.target.g.mat.matmul(&one_b.mat) {
            return invalid("alpha g differs from g' (1 ⊗ beta)");
        }
        Ok(())
    }

    /// `o ∘ self`.
    pub fn then(&self, o: &QuadrupleHom) -> QuadrupleHom {
        QuadrupleHom::new_unchecked(
            &self.source,
            &o.target,
            o.alpha.mat.matmul(&self.alpha.mat),
            o.beta.mat.matmul(&self.beta.mat),
        )
    }

    pub fn is_iso(&self) -> bool {
        self.alpha.is_iso() && self.beta.is_iso()
    }

    /// Blockwise kernel `(Ker α, Ker β, h, j)` with its inclusion.
    pub fn kernel(&self) -> Result<(QuadrupleModule, QuadrupleHom)> {
        let ctx = self.source.ctx();
        let (kx, ix) = self.alpha.kernel();
        let (ky, iy) = self.beta.kernel();
        let mk = tensor_over(&ctx.m, &kx)?;
        let nk = tensor_over(&ctx.n, &ky)?;
        let f_i = ModuleHom::new_unchecked(
            mk.module.clone(),
            self.source.y.clone(),
            self.source.f.mat.matmul(&tensor_map_between(&ctx.m, &mk, &self.source.mx, &ix).mat),
        );
        let g_i = ModuleHom::new_unchecked(
            nk.module.clone(),
            self.source.x.clone(),
            self.source.g.mat.matmul(&tensor_map_between(&ctx.n, &nk, &self.source.ny, &iy).mat),
        );
        let h = f_i.factor_through_mono(&iy).ok_or_else(|| Error::Verification("kernel square does not factor".into()))?;
        let j = g_i.factor_through_mono(&ix).ok_or_else(|| Error::Verification("kernel square does not factor".into()))?;
        let k = QuadrupleModule::new_unchecked(ctx, kx, ky, h.mat, j.mat)?;
        let inc = QuadrupleHom::new_unchecked(&k, &self.source, ix.mat, iy.mat);
        Ok((k, inc))
    }

    /// Blockwise cokernel with its projection.
    pub fn cokernel(&self) -> Result<(QuadrupleModule, QuadrupleHom)> {
        let ctx = self.source.ctx();
        let (cx, px) = self.alpha.cokernel();
        let (cy, py) = self.beta.cokernel();
        let mc = tensor_over(&ctx.m, &cx)?;
        let nc = tensor_over(&ctx.n, &cy)?;
        let one_px = tensor_map_between(&ctx.m, &self.target.mx, &mc, &px);
        let one_py = tensor_map_between(&ctx.n, &self.target.ny, &nc, &py);
        let pf = ModuleHom::new_unchecked(self.target.mx.module.clone(), cy.clone(), py.mat.matmul(&self.target.f.mat));
        let pg = ModuleHom::new_unchecked(self.target.ny.module.clone(), cx.clone(), px.mat.matmul(&self.target.g.mat));
        let f2 = pf.factor_through_epi(&one_px).ok_or_else(|| Error::Verification("cokernel square does not factor".into()))?;
        let g2 = pg.factor_through_epi(&one_py).ok_or_else(|| Error::Verification("cokernel square does not factor".into()))?;
        let c = QuadrupleModule::new_unchecked(ctx, cx, cy, f2.mat, g2.mat)?;
        let proj = QuadrupleHom::new_unchecked(&self.target, &c, px.mat, py.mat);
        Ok((c, proj))
    }
}
