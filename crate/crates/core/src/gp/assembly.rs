//! The total resolution `T^i = T_Λ(P^i) ⊕ T_B(Q^i)` of a module satisfying
//! the criterion, glued from complete resolutions of `Coker g` and
//! `Coker f` by two horseshoes.

use std::sync::Arc;

use crate::algebra::{FDModule, ModuleHom};
use crate::bimodule::{tensor_map_between, tensor_over, TensorModule};
use crate::complex::{horseshoe, AnchoredWindow, ComplexWindow, GPCertificate, SearchBounds, Verdict};
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;
use crate::morita::{
    ideal_bimodule, structural_maps, t_b, t_lambda, through, MoritaContext, QuadrupleHom, QuadrupleModule,
    TrivialExtension,
};

use super::criterion::{check_conditions, check_inputs, CriterionReport};

/// `T^•` as quadruples. `blocks[t]` holds `t11, t12, t21, t22` of the
/// differential leaving degree `lo + t`.
#[derive(Clone, Debug)]
pub struct TotalComplex {
    pub lo: i64,
    pub terms: Vec<QuadrupleModule>,
    pub diffs: Vec<QuadrupleHom>,
    pub blocks: Vec<[QuadrupleHom; 4]>,
    /// `(X, Y, f, g) -> T^0` onto `Ker d_T^0`.
    pub kernel: QuadrupleHom,
}

impl TotalComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.diffs.len() as i64
    }

    pub fn term(&self, i: i64) -> &QuadrupleModule {
        &self.terms[(i - self.lo) as usize]
    }

    /// The same complex of modules over the Morita ring.
    pub fn as_window(&self) -> Result<AnchoredWindow> {
        let terms: Vec<FDModule> = self.terms.iter().map(|t| t.to_module()).collect::<Result<_>>()?;
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(t, d)| ModuleHom::new_unchecked(terms[t].clone(), terms[t + 1].clone(), d.module_matrix()))
            .collect();
        let src = self.kernel.source.to_module()?;
        let t0 = terms[(-self.lo) as usize].clone();
        let kernel = ModuleHom::new_unchecked(src, t0, self.kernel.module_matrix());
        Ok(AnchoredWindow { window: ComplexWindow::new(self.lo, terms, diffs)?, kernel })
    }
}

#[derive(Clone, Debug)]
pub struct ResolutionAssembly {
    /// Complete resolution of `Coker g` over `Λ`.
    pub p: AnchoredWindow,
    /// Complete resolution of `Coker f` over `B`.
    pub q: AnchoredWindow,
    /// `ρ^i : Q^i -> M ⊗ P^{i+1}`.
    pub rho: Vec<ModuleHom>,
    /// `τ^i = (ψ ⊗ 1)(1_N ⊗ ρ^i) : N ⊗ Q^i -> I ⊗ P^{i+1}`.
    pub tau: Vec<ModuleHom>,
    /// `α^i : P^i -> I ⊗ P^{i+1}`.
    pub alpha: Vec<ModuleHom>,
    /// `β^i : P^i -> N ⊗ Q^{i+1}`.
    pub beta: Vec<ModuleHom>,
    /// `Y^i = M ⊗ P^i ⊕ Q^i` over `B`, anchored at `Y`.
    pub y: AnchoredWindow,
    /// `Z^i = I ⊗ P^i ⊕ N ⊗ Q^i` over `Λ`, anchored at `Im g`.
    pub z: AnchoredWindow,
    /// `F^i = P^i(I) ⊕ N ⊗ Q^i` over `A`, anchored at `X`.
    pub f: AnchoredWindow,
    pub t: TotalComplex,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Verification(msg.into())
}

/// Slice to `[-w, w]` and re-verify: exact, totally exact, anchored at `x`.
fn trim(c: &AnchoredWindow, w: i64, x: &FDModule, name: &str) -> Result<AnchoredWindow> {
    let win = &c.window;
    if win.lo > -w || win.hi() < w {
        return invalid(format!("{name} does not cover degrees {}..={w}", -w));
    }
    // A resolution of another presentation of `x` is re-anchored along an
    // explicit isomorphism.
    let k = if c.kernel.source == *x {
        c.kernel.clone()
    } else {
        match crate::algebra::is_isomorphic(x, &c.kernel.source)? {
            Some(iso) => iso.then(&c.kernel)?,
            None => return invalid(format!("{name} is not anchored at the expected cokernel")),
        }
    };
    let k = &k;
    let window = win.slice(-w, w);
    let d0 = window.diff(0);
    if !k.intertwines() || !k.is_injective() || !d0.mat.matmul(&k.mat).is_zero() || k.rank() + d0.rank() != k.target.dim()
    {
        return Err(fail(format!("{name}: kernel map is not onto Ker d^0")));
    }
    if !window.is_exact_interior() {
        return Err(fail(format!("{name} is not exact")));
    }
    if !window.total_exactness()? {
        return Err(fail(format!("{name} is not totally exact")));
    }
    Ok(AnchoredWindow { window, kernel: k.clone() })
}

/// `ψ ⊗ 1_P : N ⊗_B (M ⊗_Λ P) -> I ⊗_Λ P`.
fn psi_one(ext: &TrivialExtension, ctx: &MoritaContext, p: &FDModule, mp: &TensorModule, nmp: &TensorModule, ip: &TensorModule) -> Mat {
    let f = ctx.field();
    let id = Mat::identity(f, p.dim());
    let (dn, dm) = (ctx.n.dim(), ctx.m.dim());
    let blocks: Vec<Mat> = (0..dn)
        .flat_map(|s| (0..dm).map(move |i| (s, i)))
        .map(|(s, i)| ip.tensor.proj().matmul(&ext.ideal_coords.matmul(&ctx.psi.eval(s, i)).tensor_k(&id)))
        .collect();
    if blocks.is_empty() {
        return Mat::zero(f, ip.module.dim(), nmp.module.dim());
    }
    through(&Mat::hstack(&blocks.iter().collect::<Vec<_>>()), dn, &mp.tensor, &nmp.tensor)
}

fn blocks2(tl: &Mat, tr: &Mat, bl: &Mat, br: &Mat) -> Mat {
    let mut m = Mat::zero(tl.field(), tl.rows() + bl.rows(), tl.cols() + tr.cols());
    m.put(0, 0, tl);
    m.put(0, tl.cols(), tr);
    m.put(tl.rows(), 0, bl);
    m.put(tl.rows(), tl.cols(), br);
    m
}

/// Per-degree ingredients, all in the bases used by `T_Λ` and `T_B`.
struct Slot {
    p: FDModule,
    q: FDModule,
    ip: TensorModule,
    mp: TensorModule,
    nq: TensorModule,
    /// `N ⊗ Q` restricted to `Λ`.
    nq_l: FDModule,
}

/// Glue complete resolutions `pw` of `Coker g` (over `Λ`) and `qw` of
/// `Coker f` (over `B`) into a totally exact complex of projective
/// `Λ_ψ`-modules with `Ker d^0 ≅ (X, Y, f, g)`, on degrees `-window..=window`.
pub fn build_total_resolution(
    ext: &TrivialExtension,
    ctx: &Arc<MoritaContext>,
    module: &QuadrupleModule,
    pw: &AnchoredWindow,
    qw: &AnchoredWindow,
    window: usize,
) -> Result<ResolutionAssembly> {
    check_inputs(ext, ctx, module)?;
    if window == 0 {
        return invalid("window must be at least 1");
    }
    let fld = ctx.field();
    let sm = structural_maps(ctx, module)?;
    for (ok, what) in [
        (sm.eta_y.is_injective(), "M ⊗ Coker g ≅ Im f"),
        (sm.theta_x.is_injective(), "N ⊗ Coker f ≅ Im g / IX"),
        (sm.m_x.is_injective(), "I ⊗ Coker g ≅ IX"),
    ] {
        if !ok {
            return Err(Error::Precondition(format!("condition {what} fails")));
        }
    }
    let u_a = sm.lambda_x.target.clone();
    let u = ext.restrict(&u_a);
    let v = sm.mu_y.target.clone();
    let w = window as i64;
    let pw = trim(pw, w, &u, "P•")?;
    let qw = trim(qw, w, &v, "Q•")?;
    let (lo, hi) = (-w, w);
    let n = (hi - lo) as usize;

    let m_l = ext.restrict_right(&ctx.m);
    let slots: Vec<Slot> = (lo..=hi)
        .map(|i| {
            let p = pw.window.term(i).clone();
            let q = qw.window.term(i).clone();
            let nq = tensor_over(&ctx.n, &q)?;
            Ok(Slot {
                ip: tensor_over(&ext.ideal, &p)?,
                mp: tensor_over(&m_l, &p)?,
                nq_l: ext.restrict(&nq.module),
                nq,
                p,
                q,
            })
        })
        .collect::<Result<_>>()?;
    let dp = |t: usize| pw.window.diff(lo + t as i64);
    let dq = |t: usize| qw.window.diff(lo + t as i64);
    let t0 = (-lo) as usize;

    // First horseshoe, over B, on 0 -> M ⊗ U -> Y -> V -> 0.
    let mp_terms: Vec<FDModule> = slots.iter().map(|s| s.mp.module.clone()).collect();
    let mp_diffs: Vec<ModuleHom> =
        (0..n).map(|t| tensor_map_between(&m_l, &slots[t].mp, &slots[t + 1].mp, dp(t))).collect();
    let mu_l = tensor_over(&m_l, &u)?;
    let mu_a = tensor_over(&ctx.m, &u_a)?;
    let mpw = AnchoredWindow {
        window: ComplexWindow::new(lo, mp_terms, mp_diffs)?,
        kernel: tensor_map_between(&m_l, &mu_l, &slots[t0].mp, &pw.kernel),
    };
    let (id_m, id_u) = (Mat::identity(fld, ctx.m.dim()), Mat::identity(fld, u.dim()));
    let conv = mu_l.tensor.map_to(&mu_a.tensor, &id_m, &id_u);
    let inc = ModuleHom::new(mu_l.module.clone(), module.y.clone(), sm.eta_y.mat.matmul(&conv))?;
    let hs1 = horseshoe(&inc, &sm.mu_y, &mpw, &qw)?;
    let rho = hs1.rho.clone();

    // τ^i and Z•.
    let mut tau = Vec::with_capacity(n);
    let mut one_dp = Vec::with_capacity(n);
    let mut one_dq = Vec::with_capacity(n);
    for t in 0..n {
        let (s, s1) = (&slots[t], &slots[t + 1]);
        let nmp = tensor_over(&ctx.n, &s1.mp.module)?;
        let one_rho = tensor_map_between(&ctx.n, &s.nq, &nmp, &rho[t]);
        let psi = psi_one(ext, ctx, &s1.p, &s1.mp, &nmp, &s1.ip);
        let h = ModuleHom::new(s.nq_l.clone(), s1.ip.module.clone(), psi.matmul(&one_rho.mat))
            .map_err(|e| fail(format!("tau at degree {}: {e}", lo + t as i64)))?;
        tau.push(h);
        one_dp.push(tensor_map_between(&ext.ideal, &s.ip, &s1.ip, dp(t)).mat);
        one_dq.push(tensor_map_between(&ctx.n, &s.nq, &s1.nq, dq(t)).mat);
    }
    let z_terms: Vec<FDModule> = slots.iter().map(|s| s.ip.module.direct_sum(&s.nq_l)).collect();
    let z_diffs: Vec<ModuleHom> = (0..n)
        .map(|t| {
            let zero = Mat::zero(fld, slots[t + 1].nq.module.dim(), slots[t].ip.module.dim());
            let d = blocks2(&one_dp[t], &tau[t].mat, &zero, &one_dq[t]);
            ModuleHom::new_unchecked(z_terms[t].clone(), z_terms[t + 1].clone(), d)
        })
        .collect();
    let zcx = ComplexWindow::new(lo, z_terms.clone(), z_diffs)?;

    // Im g -> Z^0 through the pushout of 1 ⊗ η_Y and ψ ⊗ 1_U.
    let x_l = ext.restrict(&module.x);
    let img = module.g.mat.image_basis();
    let (h_mod, eps) = x_l.submodule(&img)?;
    let c = Mat::hstack(&[&module.g.mat, &sm.m_x.mat]);
    let c_h = img.left_inverse().ok_or_else(|| fail("dependent image basis"))?.matmul(&c);
    let ky = &hs1.complex.kernel;
    let dmp0 = slots[t0].mp.module.dim();
    let k1 = ModuleHom::new_unchecked(module.y.clone(), slots[t0].mp.module.clone(), ky.mat.block(0, dmp0, 0, ky.source.dim()));
    let k2 = ModuleHom::new_unchecked(
        module.y.clone(),
        slots[t0].q.clone(),
        ky.mat.block(dmp0, ky.target.dim(), 0, ky.source.dim()),
    );
    let nmp0 = tensor_over(&ctx.n, &slots[t0].mp.module)?;
    let top = psi_one(ext, ctx, &slots[t0].p, &slots[t0].mp, &nmp0, &slots[t0].ip)
        .matmul(&tensor_map_between(&ctx.n, &module.ny, &nmp0, &k1).mat);
    let bottom = tensor_map_between(&ctx.n, &module.ny, &slots[t0].nq, &k2).mat;
    let iu_a = tensor_over(&ideal_bimodule(ctx)?, &u_a)?;
    let iu_l = tensor_over(&ext.ideal, &u)?;
    let recoord = ext.ideal_coords.matmul(ctx.i_basis());
    let conv_i = iu_a.tensor.map_to(&iu_l.tensor, &recoord, &id_u);
    let one_iota = tensor_map_between(&ext.ideal, &iu_l, &slots[t0].ip, &pw.kernel).mat.matmul(&conv_i);
    let d = blocks2(&top, &one_iota, &bottom, &Mat::zero(fld, slots[t0].nq.module.dim(), iu_a.module.dim()));
    let hmat = c_h
        .transpose()
        .solve(&d.transpose())?
        .ok_or_else(|| fail("Im g is not the pushout of 1 ⊗ η_Y and ψ ⊗ 1"))?
        .transpose();
    let h = ModuleHom::new(h_mod.clone(), z_terms[t0].clone(), hmat)
        .map_err(|e| fail(format!("Im g -> Z^0 is not Λ-linear: {e}")))?;
    let dz0 = zcx.diff(0);
    if !h.is_injective() || !dz0.mat.matmul(&h.mat).is_zero() || h.rank() + dz0.rank() != z_terms[t0].dim() {
        return Err(fail("Ker d_Z^0 differs from Im g"));
    }
    let zw = AnchoredWindow { window: zcx, kernel: h };

    // Second horseshoe, over Λ, on 0 -> Im g -> X -> U -> 0.
    let lambda_l = ModuleHom::new_unchecked(x_l.clone(), u.clone(), sm.lambda_x.mat.clone());
    let hs2 = horseshoe(&eps, &lambda_l, &zw, &pw)?;
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for (t, r) in hs2.rho.iter().enumerate() {
        let s1 = &slots[t + 1];
        let dip = s1.ip.module.dim();
        let cols = r.mat.cols();
        alpha.push(ModuleHom::new_unchecked(slots[t].p.clone(), s1.ip.module.clone(), r.mat.block(0, dip, 0, cols)));
        beta.push(ModuleHom::new_unchecked(slots[t].p.clone(), s1.nq_l.clone(), r.mat.block(dip, r.mat.rows(), 0, cols)));
    }
    for t in 0..n {
        let dz = &hs2.complex.window.diff(lo + t as i64).mat;
        let dip1 = slots[t + 1].ip.module.dim();
        let (dip, dnq) = (slots[t].ip.module.dim(), slots[t].nq.module.dim());
        if dz.block(0, dip1, dip, dip + dnq) != tau[t].mat {
            return Err(fail(format!("tau factorization breaks at degree {}", lo + t as i64)));
        }
    }

    // T^i = T_Λ(P^i) ⊕ T_B(Q^i).
    let tl: Vec<QuadrupleModule> = slots.iter().map(|s| t_lambda(ext, ctx, &s.p)).collect::<Result<_>>()?;
    let tb: Vec<QuadrupleModule> = slots.iter().map(|s| t_b(ctx, &s.q)).collect::<Result<_>>()?;
    let terms: Vec<QuadrupleModule> = tl.iter().zip(&tb).map(|(a, b)| a.direct_sum(b)).collect::<Result<_>>()?;
    let mut diffs = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    for t in 0..n {
        let deg = lo + t as i64;
        let (s, s1) = (&slots[t], &slots[t + 1]);
        let (dip0, dnq0) = (s.ip.module.dim(), s.nq.module.dim());
        let (dp1, dnq1) = (s1.p.dim(), s1.nq.module.dim());
        let x11 = blocks2(&dp(t).mat, &Mat::zero(fld, dp1, dip0), &alpha[t].mat, &one_dp[t]);
        let y11 = mpw.window.diff(deg).mat.clone();
        let x12 = Mat::vstack(&[&Mat::zero(fld, dp1, dnq0), &tau[t].mat]);
        let y12 = rho[t].mat.clone();
        let x21 = Mat::hstack(&[&beta[t].mat, &Mat::zero(fld, dnq1, dip0)]);
        let y21 = Mat::zero(fld, s1.q.dim(), s.mp.module.dim());
        let x22 = one_dq[t].clone();
        let y22 = dq(t).mat.clone();
        let mk = |name: &str, src: &QuadrupleModule, tgt: &QuadrupleModule, x: &Mat, y: &Mat| {
            QuadrupleHom::new(src, tgt, x.clone(), y.clone())
                .map_err(|e| fail(format!("block {name} at degree {deg}: {e}")))
        };
        let b = [
            mk("t11", &tl[t], &tl[t + 1], &x11, &y11)?,
            mk("t12", &tb[t], &tl[t + 1], &x12, &y12)?,
            mk("t21", &tl[t], &tb[t + 1], &x21, &y21)?,
            mk("t22", &tb[t], &tb[t + 1], &x22, &y22)?,
        ];
        let dx = blocks2(&x11, &x12, &x21, &x22);
        let dy = blocks2(&y11, &y12, &y21, &y22);
        diffs.push(mk("d_T", &terms[t], &terms[t + 1], &dx, &dy)?);
        blocks.push(b);
    }
    for t in 1..n {
        let (a, b) = (&diffs[t - 1], &diffs[t]);
        if !b.alpha.mat.matmul(&a.alpha.mat).is_zero() || !b.beta.mat.matmul(&a.beta.mat).is_zero() {
            return Err(fail(format!("d_T^2 is nonzero at degree {}", lo + t as i64 - 1)));
        }
    }

    // X -> F^0 reordered from (I ⊗ P, N ⊗ Q, P) to (P, I ⊗ P, N ⊗ Q).
    let kf = &hs2.complex.kernel.mat;
    let (dip, dnq) = (slots[t0].ip.module.dim(), slots[t0].nq.module.dim());
    let cols = kf.cols();
    let kx = Mat::vstack(&[
        &kf.block(dip + dnq, kf.rows(), 0, cols),
        &kf.block(0, dip, 0, cols),
        &kf.block(dip, dip + dnq, 0, cols),
    ]);
    let kernel = QuadrupleHom::new(module, &terms[t0], kx, hs1.complex.kernel.mat.clone())
        .map_err(|e| fail(format!("kernel map is not a morphism of quadruples: {e}")))?;
    let t = TotalComplex { lo, terms, diffs, blocks, kernel };

    let tw = t.as_window()?;
    let d0 = tw.window.diff(0);
    let k = &tw.kernel;
    if !k.is_injective() || !d0.mat.matmul(&k.mat).is_zero() || k.rank() + d0.rank() != k.target.dim() {
        return Err(fail("Ker d_T^0 differs from the module"));
    }
    if !tw.window.is_exact_interior() {
        return Err(fail("T• is not exact"));
    }
    if !tw.window.total_exactness()? {
        return Err(fail("T• is not totally exact"));
    }

    let f_terms: Vec<FDModule> = t.terms.iter().map(|q| q.x.clone()).collect();
    let f_diffs: Vec<ModuleHom> = t.diffs.iter().map(|d| d.alpha.clone()).collect();
    let fw = AnchoredWindow { window: ComplexWindow::new(lo, f_terms, f_diffs)?, kernel: t.kernel.alpha.clone() };
    Ok(ResolutionAssembly {
        p: pw,
        q: qw,
        rho,
        tau,
        alpha,
        beta,
        y: hs1.complex,
        z: zw,
        f: fw,
        t,
    })
}

fn resolution_of(cert: &GPCertificate) -> Option<&AnchoredWindow> {
    match &cert.verdict {
        Verdict::CertifiedGP { resolution, .. } => Some(resolution),
        _ => None,
    }
}

/// Run the criterion and, if it passes, build the total resolution from
/// the certificates' own resolutions on `-bounds.window..=bounds.window`.
pub fn resolve_and_build(
    ext: &TrivialExtension,
    ctx: &Arc<MoritaContext>,
    module: &QuadrupleModule,
    bounds: SearchBounds,
) -> Result<(CriterionReport, ResolutionAssembly)> {
    let report = check_conditions(ext, ctx, module, bounds)?;
    if let Some(c) = report.overall.clause() {
        return Err(Error::Precondition(format!("criterion is {} at clause {c}", report.overall.label())));
    }
    let (Some(pw), Some(qw)) = (resolution_of(&report.cokernel_g), resolution_of(&report.cokernel_f)) else {
        return Err(Error::Verification("passing report without resolutions".into()));
    };
    let asm = build_total_resolution(ext, ctx, module, pw, qw, bounds.window.max(1))?;
    Ok((report, asm))
}
