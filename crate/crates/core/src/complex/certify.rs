//! Bounded search for complete projective resolutions.
//!
//! The left tail is the minimal projective resolution. The right tail is
//! built from minimal left `add(A)`-approximations `C -> P`. If `x` is
//! Gorenstein-projective every such approximation is injective with Gorenstein-projective cokernel, so a non-injective one
//! is a witness against. A commuting isomorphism pair between two
//! segments of the right tail makes the tail periodic, and then every
//! kernel in the window, `x` included, is Gorenstein-projective (the class
//! is closed under kernels of epimorphisms).

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    ext_group, hom_space, indecomposable_projective, is_isomorphic, is_projective, is_self_injective, projective_dimension, projective_resolution, Algebra, FDModule,
    ModuleHom,
};
use crate::error::{Error, Result};
use crate::linalg::Mat;

use super::ComplexWindow;

pub const DEFAULT_WINDOW: usize = 6;
pub const DEFAULT_PERIOD_BOUND: usize = 12;
pub const DEFAULT_BUDGET: usize = 600;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Degrees `-window ..= window` are always built.
    pub window: usize,
    pub period_bound: usize,
    /// Cap on the total dimension of all terms.
    pub budget: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { window: DEFAULT_WINDOW, period_bound: DEFAULT_PERIOD_BOUND, budget: DEFAULT_BUDGET }
    }
}

/// A window together with the inclusion of `Ker d^0` into `X^0`.
#[derive(Clone, Debug)]
pub struct AnchoredWindow {
    pub window: ComplexWindow,
    pub kernel: ModuleHom,
}

/// `θ_j : X^j -> X^{j+p}` and `θ_{j+1}` with `θ_{j+1} d^j = d^{j+p} θ_j`,
/// both invertible.
#[derive(Clone, Debug)]
pub struct Periodicity {
    pub degree: i64,
    pub period: usize,
    pub theta0: Mat,
    pub theta1: Mat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    NonVanishingExt(usize),
    NonInjectiveApproximation(i64),
}

#[derive(Clone, Debug)]
pub enum Verdict {
    /// `period` is `None` only over self-injective algebras, where every
    /// module is Gorenstein-projective and the window is for display.
    CertifiedGP { period: Option<usize>, resolution: AnchoredWindow, periodicity: Option<Periodicity> },
    /// `evidence` holds the right tail up to the failing degree, when the
    /// witness refers to it.
    CertifiedNotGP { witness: Witness, evidence: Option<AnchoredWindow> },
    Unknown { bound: usize, reason: String },
}

#[derive(Clone, Debug)]
pub struct GPCertificate {
    pub module: FDModule,
    pub verdict: Verdict,
}

impl GPCertificate {
    pub fn is_gp(&self) -> Option<bool> {
        match self.verdict {
            Verdict::CertifiedGP { .. } => Some(true),
            Verdict::CertifiedNotGP { .. } => Some(false),
            Verdict::Unknown { .. } => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.verdict {
            Verdict::CertifiedGP { .. } => "CertifiedGP",
            Verdict::CertifiedNotGP { .. } => "CertifiedNotGP",
            Verdict::Unknown { .. } => "Unknown",
        }
    }
}

/// The split complex `P ⊕ P` with `d = [[0, 1], [0, 0]]` on `[-w, w]`.
pub fn split_window(p: &FDModule, w: usize) -> AnchoredWindow {
    let f = p.field();
    let n = p.dim();
    let t = p.direct_sum(p);
    let mut d = Mat::zero(f, 2 * n, 2 * n);
    d.put(0, n, &Mat::identity(f, n));
    let len = 2 * w + 1;
    let terms = vec![t.clone(); len];
    let diffs = vec![ModuleHom::new_unchecked(t.clone(), t.clone(), d); len - 1];
    let kernel = ModuleHom::new_unchecked(p.clone(), t, Mat::vstack(&[&Mat::identity(f, n), &Mat::zero(f, n, n)]));
    AnchoredWindow { window: ComplexWindow::new_unchecked(-(w as i64), terms, diffs), kernel }
}

/// Minimal left `add(A)`-approximation `C -> ⊕ A e_c`. For each idempotent
/// class `c` the components are elements of `Hom_A(C, A) e_c` independent
/// modulo `Hom_A(C, A) rad e_c`, so together they form a minimal
/// generating set of `Hom_A(C, A)` as a right module.
pub fn left_approximation(c: &FDModule) -> Result<ModuleHom> {
    let alg = c.algebra();
    let f = c.field();
    let reg = FDModule::regular(alg);
    let hs = hom_space(c, &reg)?;
    let rad = alg.radical()?;
    let idem = alg.idempotents()?;
    let rows = alg.dim() * c.dim();
    let mut parts: Vec<FDModule> = Vec::new();
    let mut comps: Vec<Mat> = Vec::new();
    for cls in 0..idem.n_classes() {
        let re = alg.right_mult(idem.rep(cls));
        let pb = &idem.proj_basis[cls];
        let coords = pb.left_inverse().expect("projective basis is independent");
        let pc = indecomposable_projective(alg, cls)?;
        let mut span: Vec<Mat> = Vec::new();
        for h in &hs.basis {
            for t in 0..rad.cols() {
                span.push(re.matmul(&alg.right_mult(&rad.col(t))).matmul(h).vectorize());
            }
        }
        let mut cur = Mat::from_cols(f, rows, &span);
        let mut rank = cur.rank();
        for h in &hs.basis {
            let g = re.matmul(h);
            let next = Mat::hstack(&[&cur, &g.vectorize()]);
            let r = next.rank();
            if r > rank {
                rank = r;
                cur = next;
                comps.push(coords.matmul(&g));
                parts.push(pc.clone());
            }
        }
    }
    let (target, _, _) = FDModule::direct_sum_all(alg, &parts);
    let mat = if comps.is_empty() { Mat::zero(f, 0, c.dim()) } else { Mat::vstack(&comps.iter().collect::<Vec<_>>()) };
    Ok(ModuleHom::new_unchecked(c.clone(), target, mat))
}

/// Invertible `(θ_j, θ_{j+1})` commuting with `d^j` and `d^{j+p}`, if a
/// search over the solution space finds one.
pub(crate) fn commuting_pair(d0: &ModuleHom, d1: &ModuleHom) -> Result<Option<(Mat, Mat)>> {
    let f = d0.mat.field();
    if d0.source.dim() != d1.source.dim() || d0.target.dim() != d1.target.dim() {
        return Ok(None);
    }
    let h0 = hom_space(&d0.source, &d1.source)?;
    let h1 = hom_space(&d0.target, &d1.target)?;
    let rows = d1.target.dim() * d0.source.dim();
    let mut cols: Vec<Mat> = h0.basis.iter().map(|t| d1.mat.matmul(t).neg().vectorize()).collect();
    cols.extend(h1.basis.iter().map(|t| t.matmul(&d0.mat).vectorize()));
    let sys = Mat::from_cols(f, rows, &cols);
    let sols = sys.kernel_basis();
    if sols.cols() == 0 {
        return Ok(if d0.source.dim() == 0 && d0.target.dim() == 0 {
            Some((Mat::zero(f, 0, 0), Mat::zero(f, 0, 0)))
        } else {
            None
        });
    }
    let n0 = h0.dim();
    let build = |v: &Mat| -> (Mat, Mat) {
        let mut a = Mat::zero(f, d1.source.dim(), d0.source.dim());
        for (k, b) in h0.basis.iter().enumerate() {
            if !v.entry_is_zero(k, 0) {
                a = a.add(&b.scale(&v.get(k, 0)));
            }
        }
        let mut c = Mat::zero(f, d1.target.dim(), d0.target.dim());
        for (k, b) in h1.basis.iter().enumerate() {
            if !v.entry_is_zero(n0 + k, 0) {
                c = c.add(&b.scale(&v.get(n0 + k, 0)));
            }
        }
        (a, c)
    };
    let mut candidates: Vec<Mat> = (0..sols.cols()).map(|t| sols.col(t)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..32 {
        let coeffs = crate::gen::random_mat(&mut rng, f, sols.cols(), 1);
        candidates.push(sols.matmul(&coeffs));
    }
    for v in &candidates {
        let (a, c) = build(v);
        if a.is_invertible() && c.is_invertible() {
            return Ok(Some((a, c)));
        }
    }
    Ok(None)
}

struct Tail {
    terms: Vec<FDModule>,
    /// `diffs[t] : terms[t] -> terms[t + 1]`.
    diffs: Vec<ModuleHom>,
    /// Cokernel of the last approximation and the projection onto it.
    next: (FDModule, ModuleHom),
    total: usize,
}

enum Step {
    Ok,
    NotInjective,
}

impl Tail {
    fn start(x: &FDModule) -> Result<(Tail, ModuleHom, Step)> {
        let a = left_approximation(x)?;
        let inj = a.is_injective();
        let (c, p) = a.cokernel();
        let total = a.target.dim();
        let tail = Tail { terms: vec![a.target.clone()], diffs: vec![], next: (c, p), total };
        Ok((tail, a, if inj { Step::Ok } else { Step::NotInjective }))
    }

    /// Append `X^{t+1}` with `d^t = approx ∘ proj`.
    fn extend(&mut self) -> Result<Step> {
        let (c, p) = self.next.clone();
        let a = left_approximation(&c)?;
        let d = p.then(&a)?;
        let inj = a.is_injective();
        self.total += a.target.dim();
        self.terms.push(a.target.clone());
        self.diffs.push(d);
        self.next = a.cokernel();
        Ok(if inj { Step::Ok } else { Step::NotInjective })
    }
}

fn assemble(left: &ComplexWindow, cover: &ModuleHom, iota: &ModuleHom, tail: &Tail) -> Result<AnchoredWindow> {
    // left: degrees -n..=-1 ending in the cover term; d^{-1} = ι ∘ cover.
    let mut terms = left.terms.clone();
    let mut diffs = left.diffs.clone();
    diffs.push(cover.then(iota)?);
    terms.extend(tail.terms.iter().cloned());
    diffs.extend(tail.diffs.iter().cloned());
    Ok(AnchoredWindow { window: ComplexWindow::new_unchecked(left.lo, terms, diffs), kernel: iota.clone() })
}

/// Left tail of length `w` ending at degree `-1`, padded with zeros if the
/// resolution stops early.
fn left_tail(x: &FDModule, w: usize) -> Result<(ComplexWindow, ModuleHom)> {
    let r = projective_resolution(x, w.saturating_sub(1))?;
    let mut terms = r.complex.terms.clone();
    let mut diffs = r.complex.diffs.clone();
    while terms.len() < w {
        let z = FDModule::zero(x.algebra());
        diffs.insert(0, ModuleHom::zero(&z, &terms[0]));
        terms.insert(0, z);
    }
    let lo = -(terms.len() as i64);
    Ok((ComplexWindow::new_unchecked(lo, terms, diffs), r.augmentation))
}

pub fn certify_gorenstein_projective(x: &FDModule, bounds: SearchBounds) -> Result<GPCertificate> {
    let alg: Arc<Algebra> = x.algebra().clone();
    let w = bounds.window.max(2);
    let done = |verdict| Ok(GPCertificate { module: x.clone(), verdict });

    if is_projective(x)? {
        let resolution = split_window(x, w);
        let f = x.field();
        let t = resolution.window.terms[0].dim();
        let periodicity = Periodicity { degree: 0, period: 1, theta0: Mat::identity(f, t), theta1: Mat::identity(f, t) };
        return done(Verdict::CertifiedGP { period: Some(1), resolution, periodicity: Some(periodicity) });
    }
    let reg = FDModule::regular(&alg);
    // Finite projective dimension n >= 1 forces Ext^n(x, A) != 0.
    if let Some(n) = projective_dimension(x, w.max(bounds.period_bound))? {
        if ext_group(x, &reg, n)? != 0 {
            return done(Verdict::CertifiedNotGP { witness: Witness::NonVanishingExt(n), evidence: None });
        }
    }
    for i in 1..=w {
        if ext_group(x, &reg, i)? != 0 {
            return done(Verdict::CertifiedNotGP { witness: Witness::NonVanishingExt(i), evidence: None });
        }
    }

    let (left, cover) = left_tail(x, w)?;
    let (mut tail, iota, step) = Tail::start(x)?;
    if let Step::NotInjective = step {
        let ev = assemble(&left, &cover, &iota, &tail)?;
        return done(Verdict::CertifiedNotGP { witness: Witness::NonInjectiveApproximation(0), evidence: Some(ev) });
    }
    let reach = w.max(bounds.period_bound + 2);
    let mut found: Option<Periodicity> = None;
    let mut exhausted = false;
    // tail.terms[t] is X^t.
    while tail.terms.len() <= reach {
        if left.terms.iter().map(|t| t.dim()).sum::<usize>() + tail.total > bounds.budget {
            exhausted = true;
            break;
        }
        let deg = tail.terms.len() as i64;
        if let Step::NotInjective = tail.extend()? {
            let ev = assemble(&left, &cover, &iota, &tail)?;
            return done(Verdict::CertifiedNotGP { witness: Witness::NonInjectiveApproximation(deg), evidence: Some(ev) });
        }
        if found.is_none() {
            // New pairs end at d^{deg}: j + p = deg - 1 with j >= 0.
            let top = deg as usize - 1;
            for p in 1..=bounds.period_bound.min(top) {
                let j = top - p;
                let (d0, d1) = (&tail.diffs[j], &tail.diffs[j + p]);
                if d0.source.dim() != d1.source.dim() || d0.target.dim() != d1.target.dim() {
                    continue;
                }
                let (k0, _, _) = d0.image();
                let (k1, _, _) = d1.image();
                if k0.dim() != k1.dim() || is_isomorphic(&k0, &k1)?.is_none() {
                    continue;
                }
                if let Some((theta0, theta1)) = commuting_pair(d0, d1)? {
                    found = Some(Periodicity { degree: j as i64, period: p, theta0, theta1 });
                    break;
                }
            }
        }
        if found.is_some() && tail.terms.len() > w {
            break;
        }
    }
    let resolution = assemble(&left, &cover, &iota, &tail)?;
    if let Some(per) = found {
        let period = Some(per.period);
        return done(Verdict::CertifiedGP { period, resolution, periodicity: Some(per) });
    }
    if is_self_injective(&alg)? {
        return done(Verdict::CertifiedGP { period: None, resolution, periodicity: None });
    }
    let reason = if exhausted { "dimension budget exhausted" } else { "no period found" };
    done(Verdict::Unknown { bound: bounds.period_bound, reason: reason.into() })
}

/// The resolution of a certified module, or an error naming the verdict.
pub fn complete_resolution(x: &FDModule, bounds: SearchBounds) -> Result<AnchoredWindow> {
    let cert = certify_gorenstein_projective(x, bounds)?;
    match cert.verdict {
        Verdict::CertifiedGP { resolution, .. } => Ok(resolution),
        Verdict::CertifiedNotGP { witness, .. } => {
            Err(Error::Precondition(format!("module is not Gorenstein-projective: {witness:?}")))
        }
        Verdict::Unknown { reason, .. } => Err(Error::Undetermined(reason)),
    }
}
