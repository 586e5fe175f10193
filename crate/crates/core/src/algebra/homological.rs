use std::sync::Arc;

use crate::complex::ComplexWindow;
use crate::error::Result;
use crate::linalg::{Mat, Quotient};

use super::{hom_space, Algebra, FDModule, ModuleHom};

/// Indecomposable projective `A e` for idempotent class `c`.
pub fn indecomposable_projective(alg: &Arc<Algebra>, c: usize) -> Result<FDModule> {
    let idem = alg.idempotents()?;
    let (p, _) = FDModule::regular(alg).submodule(&idem.proj_basis[c])?;
    Ok(p)
}

/// Simple modules, one per idempotent class, in class order.
pub fn simple_modules(alg: &Arc<Algebra>) -> Result<Vec<FDModule>> {
    let idem = alg.idempotents()?;
    (0..idem.n_classes())
        .map(|c| {
            let p = indecomposable_projective(alg, c)?;
            let r = p.ideal_times(alg.radical()?);
            Ok(p.quotient(&r).0)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub module: FDModule,
    pub map: ModuleHom,
    /// Idempotent class of each indecomposable summand, in order.
    pub summands: Vec<usize>,
    /// Image in `X` of the generator `e` of each summand.
    pub generators: Mat,
}

/// Minimal projective cover `P -> X` with kernel inside `rad P`.
pub fn projective_cover(x: &FDModule) -> Result<ProjectiveCover> {
    let alg = x.algebra();
    let f = x.field();
    let idem = alg.idempotents()?;
    let mut span = x.ideal_times(alg.radical()?);
    let mut rank = span.cols();
    let mut gens: Vec<(usize, Mat)> = Vec::new();
    for c in 0..idem.n_classes() {
        if rank == x.dim() {
            break;
        }
        let ex = x.act_by(idem.rep(c)).image_basis();
        for t in 0..ex.cols() {
            let v = ex.col(t);
            let next = Mat::hstack(&[&span, &v]);
            let r = next.rank();
            if r > rank {
                rank = r;
                span = next;
                gens.push((c, v));
            }
        }
    }
    let mut parts = Vec::new();
    let mut blocks = Vec::new();
    for (c, v) in &gens {
        let p = indecomposable_projective(alg, *c)?;
        let b = &idem.proj_basis[*c];
        let cols: Vec<Mat> = (0..b.cols()).map(|t| x.act_by(&b.col(t)).matmul(v)).collect();
        blocks.push(Mat::from_cols(f, x.dim(), &cols));
        parts.push(p);
    }
    let (module, _, _) = FDModule::direct_sum_all(alg, &parts);
    let map = ModuleHom::new_unchecked(module.clone(), x.clone(), Mat::from_cols(f, x.dim(), &blocks));
    let generators = Mat::from_cols(f, x.dim(), &gens.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>());
    Ok(ProjectiveCover { module, map, summands: gens.iter().map(|(c, _)| *c).collect(), generators })
}

pub fn is_projective(x: &FDModule) -> Result<bool> {
    Ok(projective_cover(x)?.module.dim() == x.dim())
}

/// Minimal projective resolution `P^{-n} -> ... -> P^0 -> X`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: ComplexWindow,
    pub augmentation: ModuleHom,
    /// Inclusion of the last kernel `Ker(d^{-n})` into `P^{-n}`.
    pub last_kernel: ModuleHom,
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.complex.terms.len() - 1
    }

    /// The resolution stopped because a kernel vanished.
    pub fn is_finite(&self) -> bool {
        self.last_kernel.source.dim() == 0
    }

    /// `P^{-i}` (zero beyond the computed range).
    pub fn term(&self, i: usize) -> Option<&FDModule> {
        self.complex.terms.len().checked_sub(1 + i).map(|t| &self.complex.terms[t])
    }
}

/// Resolve `length` steps to the left, stopping early when a kernel is zero.
pub fn projective_resolution(x: &FDModule, length: usize) -> Result<Resolution> {
    let cov = projective_cover(x)?;
    let mut terms = vec![cov.module.clone()];
    let mut diffs: Vec<ModuleHom> = Vec::new();
    let (mut k, mut inc) = cov.map.kernel();
    for _ in 0..length {
        if k.dim() == 0 {
            break;
        }
        let c = projective_cover(&k)?;
        let d = c.map.then(&inc)?;
        let (k2, inc2) = c.map.kernel();
        terms.push(c.module.clone());
        diffs.push(d);
        k = k2;
        inc = inc2;
    }
    terms.reverse();
    diffs.reverse();
    let lo = -(terms.len() as i64 - 1);
    let complex = ComplexWindow::new_unchecked(lo, terms, diffs);
    Ok(Resolution { complex, augmentation: cov.map, last_kernel: inc })
}

/// Projective dimension if it is at most `bound`.
pub fn projective_dimension(x: &FDModule, bound: usize) -> Result<Option<usize>> {
    if x.dim() == 0 {
        return Ok(Some(0));
    }
    let r = projective_resolution(x, bound + 1)?;
    if r.is_finite() {
        Ok(Some(r.length()))
    } else {
        Ok(None)
    }
}

/// `dim Ext^i_A(X, Y)`.
pub fn ext_group(x: &FDModule, y: &FDModule, i: usize) -> Result<usize> {
    x.check_same(y, "Ext between modules over different algebras")?;
    let r = projective_resolution(x, i + 1)?;
    let f = x.field();
    // Hom(P^{-j}, Y) and the rank of Hom(d^{-j-1}, Y): Hom(P^{-j},Y) -> Hom(P^{-j-1},Y)
    let hom_dim = |j: usize| -> Result<usize> {
        match r.term(j) {
            Some(p) => Ok(hom_space(p, y)?.dim()),
            None => Ok(0),
        }
    };
    let out_rank = |j: usize| -> Result<usize> {
        let (Some(p), Some(q)) = (r.term(j), r.term(j + 1)) else { return Ok(0) };
        let d = r.complex.diff(-(j as i64) - 1);
        let hs = hom_space(p, y)?;
        let cols: Vec<Mat> = hs.basis.iter().map(|h| h.matmul(&d.mat).vectorize()).collect();
        Ok(Mat::from_cols(f, y.dim() * q.dim(), &cols).rank())
    };
    let inc = if i == 0 { 0 } else { out_rank(i - 1)? };
    Ok(hom_dim(i)? - out_rank(i)? - inc)
}

/// `r ⊗_A X` for a right module `r` (a left module over the opposite
/// algebra, same basis): quotient of `r ⊗_k X`.
pub(crate) fn tensor_quotient(r: &FDModule, x: &FDModule) -> Quotient {
    let f = x.field();
    let (dr, dx) = (r.dim(), x.dim());
    let rels: Vec<Mat> = x
        .algebra()
        .generators()
        .iter()
        .map(|&g| r.action(g).tensor_k(&Mat::identity(f, dx)).sub(&Mat::identity(f, dr).tensor_k(x.action(g))))
        .collect();
    Quotient::new(f, dr * dx, &Mat::from_cols(f, dr * dx, &rels))
}

/// `dim Tor_i^A(r, X)` with `r` a right `A`-module given over `A^op`.
pub fn tor_group(r: &FDModule, x: &FDModule, i: usize) -> Result<usize> {
    if r.algebra().dim() != x.algebra().dim() {
        return Err(crate::error::Error::AlgebraMismatch("Tor: right module over a different algebra".into()));
    }
    let res = projective_resolution(x, i + 1)?;
    let f = x.field();
    let quots: Vec<Option<Quotient>> = (0..=i + 1).map(|j| res.term(j).map(|p| tensor_quotient(r, p))).collect();
    // rank of 1⊗d^{-j}: r⊗P^{-j} -> r⊗P^{-j+1}, for j >= 1
    let rank_in = |j: usize| -> usize {
        if j == 0 {
            return 0;
        }
        let (Some(qs), Some(qt)) = (&quots[j], &quots[j - 1]) else { return 0 };
        let d = res.complex.diff(-(j as i64));
        let m = qt.proj.matmul(&Mat::identity(f, r.dim()).tensor_k(&d.mat)).matmul(&qs.lift);
        m.rank()
    };
    let dim = quots[i].as_ref().map(|q| q.dim()).unwrap_or(0);
    Ok(dim - rank_in(i) - rank_in(i + 1))
}

/// Injective dimension via the projective dimension of the dual over the
/// opposite algebra.
pub fn injective_dimension(x: &FDModule, bound: usize) -> Result<Option<usize>> {
    let op = x.algebra().opposite_arc();
    projective_dimension(&x.dual(&op), bound)
}

pub fn global_dimension(alg: &Arc<Algebra>, bound: usize) -> Result<Option<usize>> {
    let mut g = 0;
    for s in simple_modules(alg)? {
        match projective_dimension(&s, bound)? {
            Some(d) => g = g.max(d),
            None => return Ok(None),
        }
    }
    Ok(Some(g))
}

pub fn is_self_injective(alg: &Arc<Algebra>) -> Result<bool> {
    let op = alg.opposite_arc();
    is_projective(&FDModule::regular(alg).dual(&op))
}

pub fn is_injective_module(x: &FDModule) -> Result<bool> {
    let op = x.algebra().opposite_arc();
    is_projective(&x.dual(&op))
}
