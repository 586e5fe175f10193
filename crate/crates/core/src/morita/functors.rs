//! Natural maps of a context and the twelve recollement functors.

use std::sync::Arc;

use crate::algebra::{FDModule, ModuleHom};
use crate::bimodule::{hom_map_between, hom_module, tensor_map_between, tensor_over, HomModule};
use crate::error::{Error, Result};
use crate::linalg::Mat;

use super::quadruple::{phi_matrix, psi_matrix};
use super::{MoritaContext, QuadrupleHom, QuadrupleModule};

/// `Ψ_X : N ⊗ (M ⊗ X) -> X`.
pub fn psi_map(ctx: &MoritaContext, x: &FDModule) -> Result<ModuleHom> {
    let mx = tensor_over(&ctx.m, x)?;
    let nmx = tensor_over(&ctx.n, &mx.module)?;
    let m = psi_matrix(ctx, x, &mx, &nmx);
    Ok(ModuleHom::new_unchecked(nmx.module, x.clone(), m))
}

/// `Φ_Y : M ⊗ (N ⊗ Y) -> Y`.
pub fn phi_map(ctx: &MoritaContext, y: &FDModule) -> Result<ModuleHom> {
    let ny = tensor_over(&ctx.n, y)?;
    let mny = tensor_over(&ctx.m, &ny.module)?;
    let m = phi_matrix(ctx, y, &ny, &mny);
    Ok(ModuleHom::new_unchecked(mny.module, y.clone(), m))
}

/// `ζ_X : M ⊗_A X -> Hom_A(N, X)`, `m ⊗ x -> [n -> ψ(n ⊗ m) x]`.
pub fn zeta_map(ctx: &MoritaContext, x: &FDModule) -> Result<(HomModule, ModuleHom)> {
    let mx = tensor_over(&ctx.m, x)?;
    let hn = hom_module(&ctx.n, x)?;
    let f = ctx.field();
    let (dm, dn, dx) = (ctx.m.dim(), ctx.n.dim(), x.dim());
    let acts: Vec<Vec<Mat>> = (0..dm).map(|i| (0..dn).map(|s| x.act_by(&ctx.psi.eval(s, i))).collect()).collect();
    let cols: Vec<Mat> = (0..dm * dx)
        .map(|ij| {
            let (i, j) = (ij / dx, ij % dx);
            let h = Mat::from_cols(f, dx, &(0..dn).map(|s| acts[i][s].col(j)).collect::<Vec<_>>());
            hn.coords_of(&h)
        })
        .collect();
    let zk = Mat::from_cols(f, hn.module.dim(), &cols);
    let m = zk.matmul(mx.tensor.lift());
    Ok((hn.clone(), ModuleHom::new_unchecked(mx.module, hn.module.clone(), m)))
}

/// `ξ_Y : N ⊗_B Y -> Hom_B(M, Y)`, `n ⊗ y -> [m -> φ(m ⊗ n) y]`.
pub fn xi_map(ctx: &MoritaContext, y: &FDModule) -> Result<(HomModule, ModuleHom)> {
    let ny = tensor_over(&ctx.n, y)?;
    let hm = hom_module(&ctx.m, y)?;
    let f = ctx.field();
    let (dm, dn, dy) = (ctx.m.dim(), ctx.n.dim(), y.dim());
    let acts: Vec<Vec<Mat>> = (0..dn).map(|s| (0..dm).map(|i| y.act_by(&ctx.phi.eval(i, s))).collect()).collect();
    let cols: Vec<Mat> = (0..dn * dy)
        .map(|sj| {
            let (s, j) = (sj / dy, sj % dy);
            let h = Mat::from_cols(f, dy, &(0..dm).map(|i| acts[s][i].col(j)).collect::<Vec<_>>());
            hm.coords_of(&h)
        })
        .collect();
    let xk = Mat::from_cols(f, hm.module.dim(), &cols);
    let m = xk.matmul(ny.tensor.lift());
    Ok((hm.clone(), ModuleHom::new_unchecked(ny.module, hm.module.clone(), m)))
}

/// Evaluation `N ⊗_B Hom_A(N, X) -> X` (or `M ⊗_A Hom_B(M, Y) -> Y` when
/// called with `M`).
fn evaluation(bim: &crate::bimodule::Bimodule, hm: &HomModule, x: &FDModule) -> Result<ModuleHom> {
    let t = tensor_over(bim, &hm.module)?;
    let f = x.field();
    let dh = hm.module.dim();
    let cols: Vec<Mat> = (0..bim.dim() * dh).map(|st| hm.space.basis[st % dh].col(st / dh)).collect();
    let wk = Mat::from_cols(f, x.dim(), &cols);
    Ok(ModuleHom::new_unchecked(t.module, x.clone(), wk.matmul(t.tensor.lift())))
}

/// `δ_X : N ⊗_B Hom_A(N, X) -> X`.
pub fn delta_a(ctx: &MoritaContext, x: &FDModule) -> Result<(HomModule, ModuleHom)> {
    let hn = hom_module(&ctx.n, x)?;
    let d = evaluation(&ctx.n, &hn, x)?;
    Ok((hn, d))
}

/// `δ_Y : M ⊗_A Hom_B(M, Y) -> Y`.
pub fn delta_b(ctx: &MoritaContext, y: &FDModule) -> Result<(HomModule, ModuleHom)> {
    let hm = hom_module(&ctx.m, y)?;
    let d = evaluation(&ctx.m, &hm, y)?;
    Ok((hm, d))
}

#[derive(Clone, Debug)]
pub struct NaturalMaps {
    pub psi_x: ModuleHom,
    pub phi_y: ModuleHom,
    pub zeta_x: ModuleHom,
    pub xi_y: ModuleHom,
    pub delta_x: ModuleHom,
    pub delta_y: ModuleHom,
}

pub fn natural_maps(ctx: &MoritaContext, x: &FDModule, y: &FDModule) -> Result<NaturalMaps> {
    Ok(NaturalMaps {
        psi_x: psi_map(ctx, x)?,
        phi_y: phi_map(ctx, y)?,
        zeta_x: zeta_map(ctx, x)?.1,
        xi_y: xi_map(ctx, y)?.1,
        delta_x: delta_a(ctx, x)?.1,
        delta_y: delta_b(ctx, y)?.1,
    })
}

/// `T_A(X) = (X, M ⊗ X, 1, Ψ_X)`.
pub fn t_a(ctx: &Arc<MoritaContext>, x: &FDModule) -> Result<QuadrupleModule> {
    let psi = psi_map(ctx, x)?;
    let y = tensor_over(&ctx.m, x)?.module;
    let id = Mat::identity(ctx.field(), y.dim());
    QuadrupleModule::new_unchecked(ctx, x.clone(), y, id, psi.mat)
}

/// `H_A(X) = (X, Hom_A(N, X), ζ_X, δ_X)`.
pub fn h_a(ctx: &Arc<MoritaContext>, x: &FDModule) -> Result<QuadrupleModule> {
    let (hn, z) = zeta_map(ctx, x)?;
    let (_, d) = delta_a(ctx, x)?;
    QuadrupleModule::new_unchecked(ctx, x.clone(), hn.module, z.mat, d.mat)
}

/// `T_B(Y) = (N ⊗ Y, Y, Φ_Y, 1)`.
pub fn t_b(ctx: &Arc<MoritaContext>, y: &FDModule) -> Result<QuadrupleModule> {
    let phi = phi_map(ctx, y)?;
    let x = tensor_over(&ctx.n, y)?.module;
    let id = Mat::identity(ctx.field(), x.dim());
    QuadrupleModule::new_unchecked(ctx, x, y.clone(), phi.mat, id)
}

/// `H_B(Y) = (Hom_B(M, Y), Y, δ_Y, ξ_Y)`.
pub fn h_b(ctx: &Arc<MoritaContext>, y: &FDModule) -> Result<QuadrupleModule> {
    let (hm, d) = delta_b(ctx, y)?;
    let (_, xi) = xi_map(ctx, y)?;
    QuadrupleModule::new_unchecked(ctx, hm.module, y.clone(), d.mat, xi.mat)
}

/// `Z_{A/I}(U) = (U, 0, 0, 0)`; requires `I U = 0`.
pub fn z_a(ctx: &Arc<MoritaContext>, u: &FDModule) -> Result<QuadrupleModule> {
    if u.ideal_times(ctx.i_basis()).cols() > 0 {
        return Err(Error::Precondition("I U is nonzero".into()));
    }
    QuadrupleModule::with_zero_maps(ctx, u.clone(), FDModule::zero(&ctx.b))
}

/// `Z_{B/J}(V) = (0, V, 0, 0)`; requires `J V = 0`.
pub fn z_b(ctx: &Arc<MoritaContext>, v: &FDModule) -> Result<QuadrupleModule> {
    if v.ideal_times(ctx.j_basis()).cols() > 0 {
        return Err(Error::Precondition("J V is nonzero".into()));
    }
    QuadrupleModule::with_zero_maps(ctx, FDModule::zero(&ctx.a), v.clone())
}

pub fn u_a(q: &QuadrupleModule) -> FDModule {
    q.x.clone()
}

pub fn u_b(q: &QuadrupleModule) -> FDModule {
    q.y.clone()
}

/// `P_A(X, Y, f, g) = Ker f~`, with its inclusion into `X`.
pub fn p_a(q: &QuadrupleModule) -> Result<(FDModule, ModuleHom)> {
    Ok(q.f_tilde()?.1.kernel())
}

/// `P_B(X, Y, f, g) = Ker g~`, with its inclusion into `Y`.
pub fn p_b(q: &QuadrupleModule) -> Result<(FDModule, ModuleHom)> {
    Ok(q.g_tilde()?.1.kernel())
}

/// `Q_A(X, Y, f, g) = Coker g`, with the projection from `X`.
pub fn q_a(q: &QuadrupleModule) -> (FDModule, ModuleHom) {
    q.g.cokernel()
}

/// `Q_B(X, Y, f, g) = Coker f`, with the projection from `Y`.
pub fn q_b(q: &QuadrupleModule) -> (FDModule, ModuleHom) {
    q.f.cokernel()
}

pub fn t_a_hom(ctx: &Arc<MoritaContext>, h: &ModuleHom) -> Result<QuadrupleHom> {
    let s = t_a(ctx, &h.source)?;
    let t = t_a(ctx, &h.target)?;
    let b = tensor_map_between(&ctx.m, &s.mx, &t.mx, h);
    Ok(QuadrupleHom::new_unchecked(&s, &t, h.mat.clone(), b.mat))
}

pub fn t_b_hom(ctx: &Arc<MoritaContext>, h: &ModuleHom) -> Result<QuadrupleHom> {
    let s = t_b(ctx, &h.source)?;
    let t = t_b(ctx, &h.target)?;
    let a = tensor_map_between(&ctx.n, &s.ny, &t.ny, h);
    Ok(QuadrupleHom::new_unchecked(&s, &t, a.mat, h.mat.clone()))
}

pub fn h_a_hom(ctx: &Arc<MoritaContext>, h: &ModuleHom) -> Result<QuadrupleHom> {
    let s = h_a(ctx, &h.source)?;
    let t = h_a(ctx, &h.target)?;
    let hs = hom_module(&ctx.n, &h.source)?;
    let ht = hom_module(&ctx.n, &h.target)?;
    let b = hom_map_between(&hs, &ht, h);
    Ok(QuadrupleHom::new_unchecked(&s, &t, h.mat.clone(), b.mat))
}

pub fn h_b_hom(ctx: &Arc<MoritaContext>, h: &ModuleHom) -> Result<QuadrupleHom> {
    let s = h_b(ctx, &h.source)?;
    let t = h_b(ctx, &h.target)?;
    let hs = hom_module(&ctx.m, &h.source)?;
    let ht = hom_module(&ctx.m, &h.target)?;
    let a = hom_map_between(&hs, &ht, h);
    Ok(QuadrupleHom::new_unchecked(&s, &t, a.mat, h.mat.clone()))
}

pub fn z_a_hom(ctx: &Arc<MoritaContext>, h: &ModuleHom) -> Result<QuadrupleHom> {
    let s = z_a(ctx, &h.source)?;
    let t = z_a(ctx, &h.target)?;
    Ok(QuadrupleHom::new_unchecked(&s, &t, h.mat.clone(), Mat::zero(ctx.field(), 0, 0)))
}

pub fn z_b_hom(ctx: &Arc<MoritaContext>, h: &ModuleHom) -> Result<QuadrupleHom> {
    let s = z_b(ctx, &h.source)?;
    let t = z_b(ctx, &h.target)?;
    Ok(QuadrupleHom::new_unchecked(&s, &t, Mat::zero(ctx.field(), 0, 0), h.mat.clone()))
}

/// `P_A` on a morphism: restriction of `α` to the kernels.
pub fn p_a_hom(h: &QuadrupleHom) -> Result<ModuleHom> {
    let (_, is) = p_a(&h.source)?;
    let (_, it) = p_a(&h.target)?;
    restrict_to(&is, &it, &h.alpha)
}

pub fn p_b_hom(h: &QuadrupleHom) -> Result<ModuleHom> {
    let (_, is) = p_b(&h.source)?;
    let (_, it) = p_b(&h.target)?;
    restrict_to(&is, &it, &h.beta)
}

fn restrict_to(is: &ModuleHom, it: &ModuleHom, h: &ModuleHom) -> Result<ModuleHom> {
    let comp = ModuleHom::new_unchecked(is.source.clone(), h.target.clone(), h.mat.matmul(&is.mat));
    comp.factor_through_mono(it).ok_or_else(|| Error::Verification("map does not preserve the kernels".into()))
}

/// `Q_A` on a morphism: the map induced on `Coker g`.
pub fn q_a_hom(h: &QuadrupleHom) -> Result<ModuleHom> {
    let (_, ps) = q_a(&h.source);
    let (_, pt) = q_a(&h.target);
    induce_on(&ps, &pt, &h.alpha)
}

pub fn q_b_hom(h: &QuadrupleHom) -> Result<ModuleHom> {
    let (_, ps) = q_b(&h.source);
    let (_, pt) = q_b(&h.target);
    induce_on(&ps, &pt, &h.beta)
}

fn induce_on(ps: &ModuleHom, pt: &ModuleHom, h: &ModuleHom) -> Result<ModuleHom> {
    let comp = ModuleHom::new_unchecked(h.source.clone(), pt.target.clone(), pt.mat.matmul(&h.mat));
    comp.factor_through_epi(ps).ok_or_else(|| Error::Verification("map does not descend to the cokernels".into()))
}

/// Names of the functors, for dispatch from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Functor {
    TA,
    HA,
    TB,
    HB,
    ZA,
    ZB,
    UA,
    UB,
    PA,
    PB,
    QA,
    QB,
}

impl Functor {
    pub const ALL: [Functor; 12] = [
        Functor::TA,
        Functor::HA,
        Functor::TB,
        Functor::HB,
        Functor::ZA,
        Functor::ZB,
        Functor::UA,
        Functor::UB,
        Functor::PA,
        Functor::PB,
        Functor::QA,
        Functor::QB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Functor::TA => "T_A",
            Functor::HA => "H_A",
            Functor::TB => "T_B",
            Functor::HB => "H_B",
            Functor::ZA => "Z_A/I",
            Functor::ZB => "Z_B/J",
            Functor::UA => "U_A",
            Functor::UB => "U_B",
            Functor::PA => "P_A",
            Functor::PB => "P_B",
            Functor::QA => "Q_A",
            Functor::QB => "Q_B",
        }
    }

    pub fn parse(s: &str) -> Option<Functor> {
        let norm: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_uppercase();
        Functor::ALL.into_iter().find(|f| {
            let n: String = f.name().chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_uppercase();
            n == norm || n[..2] == norm
        })
    }

    /// Whether the functor takes a corner module (rather than a quadruple).
    pub fn from_corner(self) -> bool {
        matches!(self, Functor::TA | Functor::HA | Functor::TB | Functor::HB | Functor::ZA | Functor::ZB)
    }
}

#[derive(Clone, Debug)]
pub enum FunctorValue {
    Module(FDModule),
    Quadruple(QuadrupleModule),
}

pub fn apply_functor(ctx: &Arc<MoritaContext>, which: Functor, input: &FunctorValue) -> Result<FunctorValue> {
    use Functor::*;
    match (which, input) {
        (TA, FunctorValue::Module(x)) => t_a(ctx, x).map(FunctorValue::Quadruple),
        (HA, FunctorValue::Module(x)) => h_a(ctx, x).map(FunctorValue::Quadruple),
        (TB, FunctorValue::Module(y)) => t_b(ctx, y).map(FunctorValue::Quadruple),
        (HB, FunctorValue::Module(y)) => h_b(ctx, y).map(FunctorValue::Quadruple),
        (ZA, FunctorValue::Module(x)) => z_a(ctx, x).map(FunctorValue::Quadruple),
        (ZB, FunctorValue::Module(y)) => z_b(ctx, y).map(FunctorValue::Quadruple),
        (UA, FunctorValue::Quadruple(q)) => Ok(FunctorValue::Module(u_a(q))),
        (UB, FunctorValue::Quadruple(q)) => Ok(FunctorValue::Module(u_b(q))),
        (PA, FunctorValue::Quadruple(q)) => Ok(FunctorValue::Module(p_a(q)?.0)),
        (PB, FunctorValue::Quadruple(q)) => Ok(FunctorValue::Module(p_b(q)?.0)),
        (QA, FunctorValue::Quadruple(q)) => Ok(FunctorValue::Module(q_a(q).0)),
        (QB, FunctorValue::Quadruple(q)) => Ok(FunctorValue::Module(q_b(q).0)),
        (w, _) => Err(Error::Invalid(format!("{} applied to the wrong kind of input", w.name()))),
    }
}
