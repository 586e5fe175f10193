use std::sync::Arc;

use crate::algebra::FDModule;
use crate::complex::SearchBounds;
use crate::error::{Error, Result};
use crate::gp::{check_compat, check_conditions, resolve_and_build, CompatVerdict, CriterionReport, ResolutionAssembly};
use crate::linalg::Mat;
use crate::morita::{trivial_extension, MoritaContext, QuadrupleModule, TrivialExtension};

use super::ring::{build_nc_tensor, NcTensorRing};

/// `C = C(A, Γ, M, N, 0, 0)` and `Λ_(φ,0)` for `B = Γ ⋉ (M ⊗_A N)` with
/// `φ(m ⊗ n) = (0, m ⊗ n)`, related by the verified basis map `map`.
#[derive(Clone, Debug)]
pub struct NcMoritaIso {
    pub nc: NcTensorRing,
    /// `B = Γ ⋉ J`.
    pub ext: TrivialExtension,
    /// `(A, B, M, N, φ, 0)`.
    pub morita: Arc<MoritaContext>,
    /// `C -> Λ_(φ,0)` on coordinates.
    pub map: Mat,
    pub inverse: Mat,
}

impl NcMoritaIso {
    /// A `C`-module as a module over `Λ_(φ,0)`.
    pub fn to_morita_module(&self, v: &FDModule) -> Result<FDModule> {
        Ok(v.restrict(&self.morita.ring()?.ring, &self.inverse))
    }

    /// A `Λ_(φ,0)`-module as a `C`-module.
    pub fn to_nc_module(&self, v: &FDModule) -> FDModule {
        v.restrict(&self.nc.ring, &self.map)
    }
}

pub fn iso_with_morita(ctx: &Arc<MoritaContext>) -> Result<NcMoritaIso> {
    if !ctx.phi_is_zero() || !ctx.psi_is_zero() {
        return Err(Error::Precondition("the identification needs phi = psi = 0".into()));
    }
    let nc = build_nc_tensor(ctx)?;
    let f = ctx.field();
    let ext = trivial_extension(&ctx.b, &nc.j)?;
    let b = ext.algebra.clone();
    let ida = Mat::identity(f, ctx.a.dim());
    let m = ctx.m.restrict(&b, &ext.proj, &ctx.a, &ida);
    let n = ctx.n.restrict(&ctx.a, &ida, &b, &ext.proj);
    let phi = ext.ideal_basis.matmul(nc.j_tensor.proj());
    let psi = Mat::zero(f, ctx.a.dim(), n.dim() * m.dim());
    let morita = MoritaContext::new(ctx.a.clone(), b, m, n, phi, psi)?;
    let ring = morita.ring()?.ring.clone();

    let [da, dn, dm, ..] = nc.dims;
    let corner = Mat::hstack(&[&ext.incl, &ext.ideal_basis]);
    let map = Mat::block_diag(&[&Mat::identity(f, da + dn + dm), &corner]);
    let inverse = map.inverse().ok_or_else(|| Error::Verification("basis map is singular".into()))?;
    let d = nc.dim();
    if ring.dim() != d {
        return Err(Error::Verification(format!("C has dimension {d}, the Morita ring {}", ring.dim())));
    }
    for i in 0..d {
        for k in 0..d {
            let (ei, ek) = (Mat::unit(f, d, i), Mat::unit(f, d, k));
            if map.matmul(&nc.product(&ei, &ek)) != ring.mul(&map.col(i), &map.col(k)) {
                return Err(Error::Verification(format!("basis map is not multiplicative on (b{i}, b{k})")));
            }
        }
    }
    if map.matmul(nc.ring.unit()) != *ring.unit() {
        return Err(Error::Verification("basis map does not preserve the unit".into()));
    }
    Ok(NcMoritaIso { nc, ext, morita, map, inverse })
}

/// `(X, Y, f, g)` over `(A, B, M, N, φ, ψ)` as `(Y, X, g, f)` over the
/// swapped context.
pub fn mirror_quadruple(swapped: &Arc<MoritaContext>, q: &QuadrupleModule) -> Result<QuadrupleModule> {
    QuadrupleModule::new(swapped, q.y.clone(), q.x.clone(), q.g.mat.clone(), q.f.mat.clone())
}

#[derive(Clone, Debug)]
pub struct NcReport {
    /// Verdicts for `M`, `N` and `J = M ⊗ N`.
    pub verdicts: Vec<(String, CompatVerdict)>,
    /// The criterion over the swapped context: `cokernel_f` is `Coker g`
    /// over `A`, `cokernel_g` is `Coker f` over `Γ`, `iso_b1` compares
    /// `N ⊗ Coker f` with `Im g`, `iso_b2` compares `M ⊗ Coker g` with
    /// `Im f / JY`, and `iso_b3` compares `J ⊗ Coker f` with `JY`.
    pub report: CriterionReport,
    /// The total resolution, when the criterion passes.
    pub assembly: Option<ResolutionAssembly>,
}

/// Criterion for a module `(X, Y, f, g)` over `Λ_(φ,0) ≅ C`, obtained by
/// exchanging the corners so that `B = Γ ⋉ J` plays the role of `Λ ⋉ I`.
/// Requires proof-grade weak compatibility of `M`, `N` and `J`.
pub fn check_nc_criterion(iso: &NcMoritaIso, q: &QuadrupleModule, bounds: SearchBounds) -> Result<NcReport> {
    if !Arc::ptr_eq(q.ctx(), &iso.morita) {
        return Err(Error::AlgebraMismatch("quadruple is not over the identified Morita context".into()));
    }
    let src = &iso.nc.ctx;
    let bound = bounds.window.max(bounds.period_bound);
    let mut verdicts = Vec::new();
    for (name, bim) in [("M", &src.m), ("N", &src.n), ("J", &iso.nc.j)] {
        let v = check_compat(bim, &[], bound)?;
        if !v.is_proven() {
            return Err(Error::Precondition(format!("{name} is not known to be weakly compatible")));
        }
        verdicts.push((name.to_string(), v));
    }
    let swapped = Arc::new(iso.morita.swapped());
    let mq = mirror_quadruple(&swapped, q)?;
    let report = check_conditions(&iso.ext, &swapped, &mq, bounds)?;
    let assembly = if report.passes() { Some(resolve_and_build(&iso.ext, &swapped, &mq, bounds)?.1) } else { None };
    Ok(NcReport { verdicts, report, assembly })
}
