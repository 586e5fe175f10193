use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_alg, FDModule, ModuleHom};
use crate::complex::{certify_gorenstein_projective, GPCertificate, SearchBounds};
use crate::error::{Error, Result};
use crate::morita::{structural_maps, zero_ideal_extension, MoritaContext, QuadrupleModule, TrivialExtension};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `Coker f` is Gorenstein-projective over `B`.
    CokernelF,
    /// `Coker g` is Gorenstein-projective over `Λ`.
    CokernelG,
    /// `M ⊗ Coker g ≅ Im f`.
    IsoB1,
    /// `N ⊗ Coker f ≅ Im g / IX`.
    IsoB2,
    /// `I ⊗ Coker g ≅ IX`.
    IsoB3,
}

impl Clause {
    pub const ALL: [Clause; 5] = [Clause::CokernelF, Clause::CokernelG, Clause::IsoB1, Clause::IsoB2, Clause::IsoB3];

    pub fn name(self) -> &'static str {
        match self {
            Clause::CokernelF => "cokernel_f",
            Clause::CokernelG => "cokernel_g",
            Clause::IsoB1 => "iso_b1",
            Clause::IsoB2 => "iso_b2",
            Clause::IsoB3 => "iso_b3",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Overall {
    Pass,
    Fail(Clause),
    Unknown(Clause),
}

impl Overall {
    pub fn label(self) -> &'static str {
        match self {
            Overall::Pass => "pass",
            Overall::Fail(_) => "fail",
            Overall::Unknown(_) => "unknown",
        }
    }

    pub fn clause(self) -> Option<Clause> {
        match self {
            Overall::Pass => None,
            Overall::Fail(c) | Overall::Unknown(c) => Some(c),
        }
    }
}

/// One of the comparison maps, which is onto the relevant image by
/// construction, so the isomorphism holds iff it is injective.
#[derive(Clone, Debug)]
pub struct IsoTest {
    pub map: ModuleHom,
    pub holds: bool,
}

impl IsoTest {
    fn of(map: ModuleHom) -> IsoTest {
        let holds = map.is_injective();
        IsoTest { map, holds }
    }

    pub fn source_dim(&self) -> usize {
        self.map.source.dim()
    }

    pub fn image_dim(&self) -> usize {
        self.map.rank()
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    /// Certificate for `V = Coker f` over `B`.
    pub cokernel_f: GPCertificate,
    /// Certificate for `U = Coker g` restricted to `Λ`.
    pub cokernel_g: GPCertificate,
    /// `U` as an `A`-module, before restriction.
    pub cokernel_g_over_a: FDModule,
    /// `η_Y : M ⊗ U -> Y`.
    pub iso_b1: IsoTest,
    /// `θ_X : N ⊗ V -> X / IX`.
    pub iso_b2: IsoTest,
    /// `m_X : I ⊗ U -> X`.
    pub iso_b3: IsoTest,
    pub overall: Overall,
}

impl CriterionReport {
    /// Clauses that definitely fail, in the fixed clause order.
    pub fn failures(&self) -> Vec<Clause> {
        Clause::ALL.into_iter().filter(|&c| self.clause_status(c) == Some(false)).collect()
    }

    /// `Some(true)` holds, `Some(false)` fails, `None` undetermined.
    pub fn clause_status(&self, c: Clause) -> Option<bool> {
        match c {
            Clause::CokernelF => self.cokernel_f.is_gp(),
            Clause::CokernelG => self.cokernel_g.is_gp(),
            Clause::IsoB1 => Some(self.iso_b1.holds),
            Clause::IsoB2 => Some(self.iso_b2.holds),
            Clause::IsoB3 => Some(self.iso_b3.holds),
        }
    }

    pub fn passes(&self) -> bool {
        self.overall == Overall::Pass
    }
}

fn overall(r: &CriterionReport) -> Overall {
    if let Some(c) = r.failures().first() {
        return Overall::Fail(*c);
    }
    match Clause::ALL.into_iter().find(|&c| r.clause_status(c).is_none()) {
        Some(c) => Overall::Unknown(c),
        None => Overall::Pass,
    }
}

pub(crate) fn check_inputs(ext: &TrivialExtension, ctx: &Arc<MoritaContext>, q: &QuadrupleModule) -> Result<()> {
    ext.check_context(ctx)?;
    if !same_alg(q.x.algebra(), &ctx.a) || !same_alg(q.y.algebra(), &ctx.b) {
        return Err(Error::AlgebraMismatch("quadruple is over a different context".into()));
    }
    Ok(())
}

/// Conditions (a) and (b) for a module `(X, Y, f, g)` over `Λ_ψ`.
pub fn check_conditions(
    ext: &TrivialExtension,
    ctx: &Arc<MoritaContext>,
    q: &QuadrupleModule,
    bounds: SearchBounds,
) -> Result<CriterionReport> {
    check_inputs(ext, ctx, q)?;
    let sm = structural_maps(ctx, q)?;
    let u = sm.lambda_x.target.clone();
    let v = sm.mu_y.target.clone();
    let cokernel_f = certify_gorenstein_projective(&v, bounds)?;
    let cokernel_g = certify_gorenstein_projective(&ext.restrict(&u), bounds)?;
    let mut r = CriterionReport {
        cokernel_f,
        cokernel_g,
        cokernel_g_over_a: u,
        iso_b1: IsoTest::of(sm.eta_y),
        iso_b2: IsoTest::of(sm.theta_x),
        iso_b3: IsoTest::of(sm.m_x),
        overall: Overall::Pass,
    };
    r.overall = overall(&r);
    Ok(r)
}

/// The criterion for `Λ_(0,0)`: `I = 0`, so `(b3)` is vacuous and `(b2)`
/// compares `N ⊗ Coker f` with `Im g` itself.
pub fn zero_case_check(ctx: &Arc<MoritaContext>, q: &QuadrupleModule, bounds: SearchBounds) -> Result<CriterionReport> {
    if !ctx.psi_is_zero() {
        return Err(Error::Precondition("psi must be zero".into()));
    }
    check_conditions(&zero_ideal_extension(&ctx.a), ctx, q, bounds)
}
