//! Weak and semi-weak compatibility. Finite injective dimension and the
//! tensor composition rule are proofs; agreement on supplied totally exact
//! complexes is sampled evidence only.

use std::sync::Arc;

use crate::algebra::{ext_group, injective_dimension, is_projective, same_alg, FDModule};
use crate::bimodule::{tensor_bimodules, tensor_right_left, Bimodule};
use crate::complex::ComplexWindow;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::morita::{ideal_bimodule, MoritaContext, QuadrupleModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatReason {
    /// `_A N` and `N_B` have these injective dimensions.
    FiniteInjDim(usize, usize),
    /// `X ⊗_B Y` of two compatible bimodules.
    Composition,
    /// Every supplied test complex passed; not a proof.
    Exhausted(usize),
}

impl CompatReason {
    pub fn is_proof(&self) -> bool {
        !matches!(self, CompatReason::Exhausted(_))
    }
}

/// Where a test complex showed non-exactness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatWitness {
    /// `Tor_1^B(N, Ker d^degree) != 0` for test `test`: `N ⊗ Q•` is not exact.
    Tor1 { test: usize, degree: i64, dim: usize },
    /// `Ext^1_A(Ker d^degree, N) != 0`: `Hom_A(P•, N)` is not exact.
    Ext1 { test: usize, degree: i64, dim: usize },
    /// Homology of `Hom(T•, Z)` or `Z ⊗ T•` in the given degree.
    Homology { test: usize, degree: i64, dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompatVerdict {
    WeaklyCompatible { reason: CompatReason },
    NotCompatible { witness: CompatWitness },
    /// Semi-weak compatibility of a module over the Morita ring. `c1` is
    /// the `Hom` condition (left modules), `c3` the tensor condition
    /// (right modules); `None` where not applicable. Sampled on `tests`.
    SemiWeak { c1: Option<bool>, c3: Option<bool>, tests: usize, witness: Option<CompatWitness> },
    Undetermined { reason: String },
}

impl CompatVerdict {
    /// Weak compatibility established by a proof.
    pub fn is_proven(&self) -> bool {
        matches!(self, CompatVerdict::WeaklyCompatible { reason } if reason.is_proof())
    }

    pub fn is_failure(&self) -> bool {
        match self {
            CompatVerdict::NotCompatible { .. } => true,
            CompatVerdict::SemiWeak { c1, c3, .. } => *c1 == Some(false) || *c3 == Some(false),
            _ => false,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CompatVerdict::WeaklyCompatible { .. } => "WeaklyCompatible",
            CompatVerdict::NotCompatible { .. } => "NotCompatible",
            CompatVerdict::SemiWeak { .. } => "SemiWeak",
            CompatVerdict::Undetermined { .. } => "Undetermined",
        }
    }
}

/// Exact with projective terms and exact `Hom(-, A)`.
fn verify_test(t: &ComplexWindow, idx: usize) -> Result<()> {
    if !t.is_exact_interior() {
        return Err(Error::Invalid(format!("test complex {idx} is not exact")));
    }
    if !t.total_exactness()? {
        return Err(Error::Invalid(format!("test complex {idx} is not totally exact")));
    }
    Ok(())
}

fn kernels(t: &ComplexWindow) -> impl Iterator<Item = (i64, FDModule)> + '_ {
    (t.lo..t.hi()).map(move |i| (i, t.diff(i).kernel().0))
}

/// Decision ladder for `_A N_B`: finite injective dimension on both sides,
/// then `Ext^1`/`Tor_1` witnesses against the kernels of the tests, then
/// sampled agreement. Tests over `A` probe the `Hom` condition, tests over
/// `B` the tensor condition.
pub fn check_compat(bim: &Bimodule, tests: &[ComplexWindow], bound: usize) -> Result<CompatVerdict> {
    for (k, t) in tests.iter().enumerate() {
        verify_test(t, k)?;
    }
    let left = injective_dimension(&bim.as_left(), bound)?;
    let right = injective_dimension(&bim.as_right(), bound)?;
    if let (Some(n), Some(m)) = (left, right) {
        return Ok(CompatVerdict::WeaklyCompatible { reason: CompatReason::FiniteInjDim(n, m) });
    }
    let (a, b) = (bim.left_algebra(), bim.right_algebra());
    let (na, nb) = (bim.as_left(), bim.as_right());
    let mut used = 0;
    for (k, t) in tests.iter().enumerate() {
        let alg = t.algebra();
        let (on_a, on_b) = (same_alg(alg, a), same_alg(alg, b));
        if !on_a && !on_b {
            return Err(Error::AlgebraMismatch(format!("test complex {k} is over neither side")));
        }
        used += 1;
        for (i, ker) in kernels(t) {
            if on_b {
                let dim = crate::algebra::tor_group(&nb, &ker, 1)?;
                if dim != 0 {
                    return Ok(CompatVerdict::NotCompatible { witness: CompatWitness::Tor1 { test: k, degree: i, dim } });
                }
            }
            if on_a {
                let dim = ext_group(&ker, &na, 1)?;
                if dim != 0 {
                    return Ok(CompatVerdict::NotCompatible { witness: CompatWitness::Ext1 { test: k, degree: i, dim } });
                }
            }
        }
    }
    if used > 0 {
        Ok(CompatVerdict::WeaklyCompatible { reason: CompatReason::Exhausted(used) })
    } else {
        Ok(CompatVerdict::Undetermined {
            reason: "injective dimension not finite within the bound and no test complexes".into(),
        })
    }
}

/// Proof that `_A X_B` is compatible: `_A X` of finite injective dimension
/// gives the `Hom` condition, and `X_B` projective makes `X ⊗_B -` exact
/// on every exact complex. Returns the injective dimension.
pub fn compatible_by_flatness(x: &Bimodule, bound: usize) -> Result<Option<usize>> {
    if !is_projective(&x.as_right())? {
        return Ok(None);
    }
    injective_dimension(&x.as_left(), bound)
}

/// Composition rule: `_A X_B` and `_B Y_C` whose opposites are compatible
/// give a weakly compatible `X ⊗_B Y`. For `Y` the roles of the sides swap:
/// `Y_C` needs finite injective dimension and `_B Y` must be projective.
pub fn compose_compatible(x: &Bimodule, y: &Bimodule, bound: usize) -> Result<Option<(Bimodule, CompatVerdict)>> {
    if compatible_by_flatness(x, bound)?.is_none() {
        return Ok(None);
    }
    if !is_projective(&y.as_left())? || injective_dimension(&y.as_right(), bound)?.is_none() {
        return Ok(None);
    }
    let (xy, _) = tensor_bimodules(x, y)?;
    Ok(Some((xy, CompatVerdict::WeaklyCompatible { reason: CompatReason::Composition })))
}

/// The four modules of the semi-weak hypotheses: `(N, 0, 0, 0)` and
/// `(I, 0, 0, 0)` as left modules, `(M, 0, 0, 0)` and `(I, 0, 0, 0)` as
/// right modules over `Λ_ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SemiWeakSide {
    LeftN,
    LeftI,
    RightM,
    RightI,
}

impl SemiWeakSide {
    pub const ALL: [SemiWeakSide; 4] = [SemiWeakSide::LeftN, SemiWeakSide::LeftI, SemiWeakSide::RightM, SemiWeakSide::RightI];

    pub fn name(self) -> &'static str {
        match self {
            SemiWeakSide::LeftN => "Z(N) left",
            SemiWeakSide::LeftI => "Z(I) left",
            SemiWeakSide::RightM => "Z(M) right",
            SemiWeakSide::RightI => "Z(I) right",
        }
    }
}

/// A right `Λ_ψ`-module concentrated in the `A` corner, as a left module
/// over the opposite ring: only the `A` block acts.
fn right_corner_module(ctx: &MoritaContext, right: &[Mat], dim: usize) -> Result<FDModule> {
    let ring = ctx.ring()?;
    let f = ctx.field();
    let [da, ..] = ring.dims;
    let mut action: Vec<Mat> = right[..da].to_vec();
    action.resize(ring.dim(), Mat::zero(f, dim, dim));
    Ok(FDModule::new_unchecked(ring.ring.opposite_arc(), dim, action))
}

/// Semi-weak compatibility of one of the corner modules, sampled on
/// totally exact complexes over `Λ_ψ`: left modules `Z` need `Hom(T•, Z)`
/// exact, right modules `Z ⊗ T•` exact.
pub fn check_semi_weak_quadruple(
    ctx: &Arc<MoritaContext>,
    side: SemiWeakSide,
    tests: &[ComplexWindow],
) -> Result<CompatVerdict> {
    let ring = ctx.ring()?.ring.clone();
    for (k, t) in tests.iter().enumerate() {
        if !same_alg(t.algebra(), &ring) {
            return Err(Error::AlgebraMismatch(format!("test complex {k} is not over the Morita ring")));
        }
        verify_test(t, k)?;
    }
    let ib = ideal_bimodule(ctx)?;
    let left_module = |x: FDModule| -> Result<FDModule> {
        QuadrupleModule::with_zero_maps(ctx, x, FDModule::zero(&ctx.b))?.to_module()
    };
    let z = match side {
        SemiWeakSide::LeftN => left_module(ctx.n.as_left())?,
        SemiWeakSide::LeftI => left_module(ib.as_left())?,
        SemiWeakSide::RightM => right_corner_module(ctx, ctx.m.right_actions(), ctx.m.dim())?,
        SemiWeakSide::RightI => right_corner_module(ctx, ib.right_actions(), ib.dim())?,
    };
    let is_left = matches!(side, SemiWeakSide::LeftN | SemiWeakSide::LeftI);
    for (k, t) in tests.iter().enumerate() {
        let bad = if is_left { hom_failure(t, &z)? } else { tensor_failure(t, &z) };
        if let Some((degree, dim)) = bad {
            let witness = Some(CompatWitness::Homology { test: k, degree, dim });
            let (c1, c3) = if is_left { (Some(false), None) } else { (None, Some(false)) };
            return Ok(CompatVerdict::SemiWeak { c1, c3, tests: tests.len(), witness });
        }
    }
    if tests.is_empty() {
        return Ok(CompatVerdict::Undetermined { reason: "no test complexes".into() });
    }
    let (c1, c3) = if is_left { (Some(true), None) } else { (None, Some(true)) };
    Ok(CompatVerdict::SemiWeak { c1, c3, tests: tests.len(), witness: None })
}

fn hom_failure(t: &ComplexWindow, z: &FDModule) -> Result<Option<(i64, usize)>> {
    Ok(t.hom_homology(z)?.into_iter().find(|&(_, h)| h != 0))
}

/// First interior degree where `z ⊗ T•` has homology.
fn tensor_failure(t: &ComplexWindow, z: &FDModule) -> Option<(i64, usize)> {
    let f = z.field();
    let tensors: Vec<_> = t.terms.iter().map(|x| tensor_right_left(z, x)).collect();
    let id = Mat::identity(f, z.dim());
    let ranks: Vec<usize> = (0..t.diffs.len())
        .map(|k| tensors[k].map_to(&tensors[k + 1], &id, &t.diffs[k].mat).rank())
        .collect();
    (1..t.terms.len().saturating_sub(1)).find_map(|k| {
        let h = tensors[k].dim() - ranks[k] - ranks[k - 1];
        (h != 0).then_some((t.lo + k as i64, h))
    })
}
