//! Independent re-check of GP certificates.
//!
//! Nothing here calls into the module layer beyond reading raw action
//! matrices: Hom spaces, projectivity, free resolutions and Ext are all
//! recomputed from scratch with plain linear algebra.

use crate::algebra::{Algebra, FDModule};
use crate::linalg::Mat;

use super::{AnchoredWindow, GPCertificate, Verdict, Witness};

/// Outcome of re-verification, one entry per check.
#[derive(Clone, Debug, Default)]
pub struct CertificateCheck {
    pub checks: Vec<(String, bool)>,
}

impl CertificateCheck {
    pub fn ok(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|(_, b)| *b)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, b)| !*b).map(|(s, _)| s.as_str()).collect()
    }

    fn record(&mut self, what: impl Into<String>, ok: bool) -> bool {
        self.checks.push((what.into(), ok));
        ok
    }
}

/// A module as bare matrices: one action matrix per algebra basis element.
#[derive(Clone)]
struct Raw {
    dim: usize,
    acts: Vec<Mat>,
}

impl Raw {
    fn of(x: &FDModule) -> Raw {
        Raw { dim: x.dim(), acts: x.actions().to_vec() }
    }

    fn free(alg: &Algebra, g: usize) -> Raw {
        let f = alg.field();
        let acts = if g == 0 {
            vec![Mat::zero(f, 0, 0); alg.dim()]
        } else {
            alg.lefts().iter().map(|l| Mat::block_diag(&vec![l; g])).collect()
        };
        Raw { dim: g * alg.dim(), acts }
    }

    fn sub(&self, basis: &Mat) -> Raw {
        let li = basis.left_inverse().expect("independent columns");
        Raw { dim: basis.cols(), acts: self.acts.iter().map(|a| li.matmul(&a.matmul(basis))).collect() }
    }
}

fn hom_basis(f: crate::linalg::Field, x: &Raw, y: &Raw) -> Vec<Mat> {
    let (dx, dy) = (x.dim, y.dim);
    if dx == 0 || dy == 0 {
        return vec![];
    }
    let eqs: Vec<Mat> = x
        .acts
        .iter()
        .zip(&y.acts)
        .map(|(ax, ay)| ay.tensor_k(&Mat::identity(f, dx)).sub(&Mat::identity(f, dy).tensor_k(&ax.transpose())))
        .collect();
    let k = Mat::from_rows_of(f, dx * dy, &eqs).kernel_basis();
    (0..k.cols()).map(|t| k.col(t).reshape(dy, dx)).collect()
}

fn is_hom(m: &Mat, x: &Raw, y: &Raw) -> bool {
    m.rows() == y.dim && m.cols() == x.dim && x.acts.iter().zip(&y.acts).all(|(a, b)| m.matmul(a) == b.matmul(m))
}

fn span_rank(f: crate::linalg::Field, rows: usize, vs: Vec<Mat>) -> usize {
    if vs.is_empty() || rows == 0 {
        return 0;
    }
    Mat::from_cols(f, rows, &vs).rank()
}

/// Submodule generated by the columns of `vs`.
fn generated(f: crate::linalg::Field, x: &Raw, vs: &[Mat]) -> usize {
    let cols: Vec<Mat> = vs.iter().flat_map(|v| x.acts.iter().map(move |a| a.matmul(v))).collect();
    span_rank(f, x.dim, cols)
}

/// Greedy generators, largest cyclic submodule first.
fn generators(f: crate::linalg::Field, x: &Raw) -> Vec<Mat> {
    let mut gens: Vec<Mat> = Vec::new();
    let mut have = 0;
    while have < x.dim {
        let mut best: Option<(usize, Mat)> = None;
        for i in 0..x.dim {
            let mut cand = gens.clone();
            cand.push(Mat::unit(f, x.dim, i));
            let r = generated(f, x, &cand);
            if r > have && best.as_ref().map_or(true, |(b, _)| r > *b) {
                best = Some((r, Mat::unit(f, x.dim, i)));
            }
        }
        let (r, v) = best.expect("unit vectors generate");
        gens.push(v);
        have = r;
    }
    gens
}

/// Surjection `A^g -> X` sending the `k`-th free generator to `gens[k]`.
fn free_cover(alg: &Algebra, x: &Raw) -> (Raw, Mat) {
    let f = alg.field();
    let gens = generators(f, x);
    let cols: Vec<Mat> = gens.iter().flat_map(|v| x.acts.iter().map(move |a| a.matmul(v))).collect();
    let pi = if cols.is_empty() { Mat::zero(f, x.dim, 0) } else { Mat::from_cols(f, x.dim, &cols) };
    (Raw::free(alg, gens.len()), pi)
}

/// Projectives `A e` for idempotents `e`. The idempotents are taken from
/// the algebra as hints and kept only if `e^2 = e`; the unit is always
/// included, so covers exist regardless of the hints.
struct Summands {
    parts: Vec<(Mat, Mat, Raw)>,
}

impl Summands {
    fn new(alg: &Algebra) -> Summands {
        let reg = regular(alg);
        let mut es: Vec<Mat> = alg.idempotents().map(|i| i.elems.clone()).unwrap_or_default();
        es.push(alg.unit().clone());
        let parts = es
            .into_iter()
            .filter(|e| !e.is_zero() && alg.mul(e, e) == *e)
            .map(|e| {
                let b = alg.right_mult(&e).image_basis();
                let p = reg.sub(&b);
                (e, b, p)
            })
            .collect();
        Summands { parts }
    }
}

fn act_of(alg: &Algebra, x: &Raw, a: &Mat) -> Mat {
    let terms: Vec<_> = (0..alg.dim()).map(|i| (a.get(i, 0), &x.acts[i])).collect();
    Mat::lin_comb(alg.field(), x.dim, x.dim, &terms)
}

/// Surjection `⊕ A e_k -> X`, `a ↦ a v_k`, with `v_k ∈ e_k X` chosen
/// greedily to cover as much as possible at each step.
fn cover(alg: &Algebra, sm: &Summands, x: &Raw) -> (Raw, Mat) {
    let f = alg.field();
    let cands: Vec<(usize, Mat)> = sm
        .parts
        .iter()
        .enumerate()
        .flat_map(|(k, (e, _, _))| {
            let ex = act_of(alg, x, e).image_basis();
            (0..ex.cols()).map(move |c| (k, ex.col(c))).collect::<Vec<_>>()
        })
        .collect();
    let mut chosen: Vec<(usize, Mat)> = Vec::new();
    let mut have = 0;
    while have < x.dim {
        let mut best: Option<(usize, usize)> = None;
        for (t, (_, v)) in cands.iter().enumerate() {
            let mut vs: Vec<Mat> = chosen.iter().map(|(_, w)| w.clone()).collect();
            vs.push(v.clone());
            let r = generated(f, x, &vs);
            if r > have && best.map_or(true, |(b, _)| r > b) {
                best = Some((r, t));
            }
        }
        let (r, t) = best.expect("the unit is among the idempotents");
        chosen.push(cands[t].clone());
        have = r;
    }
    let mut cols = Vec::new();
    let mut parts: Vec<&Raw> = Vec::new();
    for (k, v) in &chosen {
        let (_, b, p) = &sm.parts[*k];
        for c in 0..b.cols() {
            cols.push(act_of(alg, x, &b.col(c)).matmul(v));
        }
        parts.push(p);
    }
    let dim: usize = parts.iter().map(|p| p.dim).sum();
    let acts = (0..alg.dim())
        .map(|i| {
            if parts.is_empty() {
                Mat::zero(f, 0, 0)
            } else {
                Mat::block_diag(&parts.iter().map(|p| &p.acts[i]).collect::<Vec<_>>())
            }
        })
        .collect();
    let pi = if cols.is_empty() { Mat::zero(f, x.dim, 0) } else { Mat::from_cols(f, x.dim, &cols) };
    (Raw { dim, acts }, pi)
}

/// Projective iff the free cover `A^g -> X` splits. A section is a
/// column of `g` maps `X -> A`, so it is searched for in `Hom(X, A)^g`.
fn projective(alg: &Algebra, x: &Raw, to_a: &[Mat]) -> bool {
    let f = alg.field();
    if x.dim == 0 {
        return true;
    }
    let (fr, pi) = free_cover(alg, x);
    let g = fr.dim / alg.dim();
    let da = alg.dim();
    let mut cols = Vec::new();
    for k in 0..g {
        let pk = pi.block(0, x.dim, k * da, (k + 1) * da);
        cols.extend(to_a.iter().map(|h| pk.matmul(h).vectorize()));
    }
    if cols.is_empty() {
        return false;
    }
    let sys = Mat::from_cols(f, x.dim * x.dim, &cols);
    matches!(sys.solve(&Mat::identity(f, x.dim).vectorize()), Ok(Some(_)))
}

fn regular(alg: &Algebra) -> Raw {
    Raw { dim: alg.dim(), acts: alg.lefts().to_vec() }
}

/// `dim ker(- ∘ pre) - rank(- ∘ post)` on `Hom(T, A)` for
/// `T' -pre-> T -post-> T''`, given bases of `Hom(T, A)` and `Hom(T'', A)`.
fn hom_cohomology(f: crate::linalg::Field, da: usize, here: &[Mat], pre: &Mat, post: &Mat, next: &[Mat]) -> usize {
    let ker = here.len() - span_rank(f, da * pre.cols(), here.iter().map(|h| h.matmul(pre).vectorize()).collect());
    let img = span_rank(f, da * post.cols(), next.iter().map(|g| g.matmul(post).vectorize()).collect());
    ker - img
}

fn ext_dim(alg: &Algebra, x: &Raw, i: usize) -> usize {
    let f = alg.field();
    if x.dim == 0 {
        return 0;
    }
    let reg = regular(alg);
    // terms[t] = F_t, maps[t] : F_{t+1} -> F_t
    let mut terms = Vec::new();
    let mut maps: Vec<Mat> = Vec::new();
    let sm = Summands::new(alg);
    let (mut fr, mut pi) = cover(alg, &sm, x);
    for _ in 0..=i {
        let kb = pi.kernel_basis();
        let k = if kb.cols() == 0 { Raw { dim: 0, acts: vec![Mat::zero(f, 0, 0); alg.dim()] } } else { fr.sub(&kb) };
        terms.push(fr.clone());
        let (fr2, pi2) = cover(alg, &sm, &k);
        maps.push(kb.matmul(&pi2));
        fr = fr2;
        pi = pi2;
    }
    terms.push(fr);
    let zero = Raw { dim: 0, acts: vec![Mat::zero(f, 0, 0); alg.dim()] };
    let pre = &maps[i];
    let post = if i == 0 { Mat::zero(f, 0, terms[0].dim) } else { maps[i - 1].clone() };
    let prev = if i == 0 { &zero } else { &terms[i - 1] };
    // Hom(F_{i-1}) -> Hom(F_i) -> Hom(F_{i+1})
    hom_cohomology(f, reg.dim, &hom_basis(f, &terms[i], &reg), pre, &post, &hom_basis(f, prev, &reg))
}

/// Basis of `{h : Hom(T, A) | h ∘ pre = 0}`.
fn annihilators(f: crate::linalg::Field, t: &Raw, pre: &Mat, a: &Raw) -> Vec<Mat> {
    let hs = hom_basis(f, t, a);
    if hs.is_empty() {
        return hs;
    }
    let cols: Vec<Mat> = hs.iter().map(|h| h.matmul(pre).vectorize()).collect();
    let k = Mat::from_cols(f, a.dim * pre.cols(), &cols).kernel_basis();
    (0..k.cols())
        .map(|c| {
            let mut m = Mat::zero(f, a.dim, t.dim);
            for (b, h) in hs.iter().enumerate() {
                m = m.add(&h.scale(&k.get(b, c)));
            }
            m
        })
        .collect()
}

struct Win<'a> {
    w: &'a AnchoredWindow,
    terms: Vec<Raw>,
    /// Index into `to_a` and `proj` for each term; equal terms share one.
    slot: Vec<usize>,
    to_a: Vec<Vec<Mat>>,
    proj: Vec<bool>,
}

impl<'a> Win<'a> {
    fn new(alg: &Algebra, w: &'a AnchoredWindow) -> Win<'a> {
        let f = alg.field();
        let reg = regular(alg);
        let terms: Vec<Raw> = w.window.terms.iter().map(Raw::of).collect();
        let mut reps: Vec<usize> = Vec::new();
        let mut slot = Vec::with_capacity(terms.len());
        for (t, r) in terms.iter().enumerate() {
            match reps.iter().position(|&u| terms[u].dim == r.dim && terms[u].acts == r.acts) {
                Some(s) => slot.push(s),
                None => {
                    slot.push(reps.len());
                    reps.push(t);
                }
            }
        }
        let to_a: Vec<Vec<Mat>> = reps.iter().map(|&u| hom_basis(f, &terms[u], &reg)).collect();
        let proj = reps.iter().zip(&to_a).map(|(&u, h)| projective(alg, &terms[u], h)).collect();
        Win { w, terms, slot, to_a, proj }
    }
    fn homs(&self, i: i64) -> &[Mat] {
        &self.to_a[self.slot[(i - self.lo()) as usize]]
    }
    fn projective(&self, i: i64) -> bool {
        self.proj[self.slot[(i - self.lo()) as usize]]
    }
    fn lo(&self) -> i64 {
        self.w.window.lo
    }
    fn hi(&self) -> i64 {
        self.lo() + self.terms.len() as i64 - 1
    }
    fn t(&self, i: i64) -> &Raw {
        &self.terms[(i - self.lo()) as usize]
    }
    fn d(&self, i: i64) -> &Mat {
        &self.w.window.diffs[(i - self.lo()) as usize].mat
    }
    fn exact_at(&self, i: i64) -> bool {
        self.d(i - 1).rank() + self.d(i).rank() == self.t(i).dim
    }
}

/// Shapes, module maps, `d^2 = 0`, projective terms, and an injective
/// kernel map onto `Ker d^0`.
fn check_window(x: &Raw, w: &Win, out: &mut CertificateCheck, full_kernel: bool) -> bool {
    let mut ok = out.record("window has one differential per step", w.w.window.diffs.len() + 1 == w.terms.len());
    if !ok {
        return false;
    }
    ok &= out.record("window contains degree 0", w.lo() <= 0 && w.hi() >= 0);
    if !ok {
        return false;
    }
    for i in w.lo()..w.hi() {
        ok &= out.record(format!("d^{i} is a module map"), is_hom(w.d(i), w.t(i), w.t(i + 1)));
    }
    if !ok {
        return false;
    }
    for i in w.lo()..w.hi() - 1 {
        ok &= out.record(format!("d^{} d^{i} = 0", i + 1), w.d(i + 1).matmul(w.d(i)).is_zero());
    }
    for i in w.lo()..=w.hi() {
        ok &= out.record(format!("X^{i} is projective"), w.projective(i));
    }
    let k = &w.w.kernel.mat;
    let kernel_hom = is_hom(k, x, w.t(0));
    ok &= out.record("kernel map is a module map", kernel_hom);
    if kernel_hom && full_kernel {
        ok &= out.record("kernel map is injective", k.rank() == x.dim);
        if w.hi() > 0 {
            let img = w.d(0).matmul(k).is_zero() && k.rank() + w.d(0).rank() == w.t(0).dim;
            ok &= out.record("kernel map hits Ker d^0", img);
        }
    }
    ok
}

fn check_exact_and_total(alg: &Algebra, w: &Win, out: &mut CertificateCheck) -> bool {
    let f = alg.field();
    let mut ok = true;
    for i in w.lo() + 1..w.hi() {
        ok &= out.record(format!("exact at degree {i}"), w.exact_at(i));
        let h = hom_cohomology(f, alg.dim(), w.homs(i), w.d(i - 1), w.d(i), w.homs(i + 1));
        ok &= out.record(format!("Hom(-, A) exact at degree {i}"), h == 0);
    }
    ok
}

fn self_injective(alg: &Algebra) -> bool {
    let dual = Raw { dim: alg.dim(), acts: alg.rights().iter().map(|r| r.transpose()).collect() };
    let f = alg.field();
    let h = hom_basis(f, &dual, &regular(alg));
    projective(alg, &dual, &h)
}

/// Recheck a certificate without trusting any of its builder's code.
pub fn verify_certificate(cert: &GPCertificate) -> CertificateCheck {
    let alg: &Algebra = cert.module.algebra();
    let f = alg.field();
    let x = Raw::of(&cert.module);
    let mut out = CertificateCheck::default();
    match &cert.verdict {
        Verdict::CertifiedGP { period, resolution, periodicity } => {
            let w = Win::new(alg, resolution);
            if !check_window(&x, &w, &mut out, true) {
                return out;
            }
            check_exact_and_total(alg, &w, &mut out);
            match (period, periodicity) {
                (None, None) => {
                    out.record("algebra is self-injective", self_injective(alg));
                }
                (Some(p), Some(per)) => {
                    let (j, p) = (per.degree, *p);
                    if !out.record("period matches periodicity", per.period == p && p >= 1) {
                        return out;
                    }
                    let jp = j + p as i64;
                    if !out.record("periodic segment lies in the window", j >= 0 && j >= w.lo() + 1 && jp + 1 <= w.hi()) {
                        return out;
                    }
                    let (t0, t1) = (&per.theta0, &per.theta1);
                    out.record("θ_j is an isomorphism of modules", is_hom(t0, w.t(j), w.t(jp)) && t0.is_invertible());
                    out.record("θ_j+1 is an isomorphism of modules", is_hom(t1, w.t(j + 1), w.t(jp + 1)) && t1.is_invertible());
                    out.record(
                        "θ commutes with the differentials",
                        t1.matmul(w.d(j)) == w.d(jp).matmul(t0),
                    );
                }
                _ => {
                    out.record("period and periodicity agree", false);
                }
            }
        }
        Verdict::CertifiedNotGP { witness: Witness::NonVanishingExt(i), .. } => {
            out.record(format!("Ext^{i}(x, A) != 0"), *i >= 1 && ext_dim(alg, &x, *i) != 0);
        }
        Verdict::CertifiedNotGP { witness: Witness::NonInjectiveApproximation(deg), evidence } => {
            let deg = *deg;
            let Some(ev) = evidence else {
                out.record("evidence window present", false);
                return out;
            };
            let w = Win::new(alg, ev);
            if !check_window(&x, &w, &mut out, false) {
                return out;
            }
            if !out.record("evidence reaches the failing degree", deg >= 0 && deg <= w.hi()) {
                return out;
            }
            let reg = regular(alg);
            if deg >= 1 {
                out.record("kernel map is injective", w.w.kernel.mat.rank() == x.dim);
            }
            for t in 0..deg - 1 {
                let inj = if t == 0 {
                    let k = &w.w.kernel.mat;
                    w.d(0).matmul(k).is_zero() && k.rank() + w.d(0).rank() == w.t(0).dim
                } else {
                    w.exact_at(t)
                };
                out.record(format!("exact at degree {t}"), inj);
            }
            // prev_t : source_t -> X^{t-1}, with K^t = X^{t-1} / Im prev_t.
            let src = |t: i64| -> (Mat, Raw) {
                if t == 1 {
                    (w.w.kernel.mat.clone(), w.t(0).clone())
                } else {
                    (w.d(t - 2).clone(), w.t(t - 1).clone())
                }
            };
            for t in 0..deg {
                let approx = if t == 0 {
                    let k = &w.w.kernel.mat;
                    let h = hom_basis(f, &x, &reg).len();
                    let r = span_rank(f, reg.dim * x.dim, w.homs(0).iter().map(|g| g.matmul(k).vectorize()).collect());
                    r == h
                } else {
                    let (prev, mid) = src(t);
                    hom_cohomology(f, reg.dim, &hom_basis(f, &mid, &reg), &prev, w.d(t - 1), w.homs(t)) == 0
                };
                out.record(format!("K^{t} -> X^{t} is a left approximation"), approx);
            }
            // K^deg is not torsionless: the common kernel of Hom(K^deg, A) is nonzero.
            let torsionless = if deg == 0 {
                let hs = hom_basis(f, &x, &reg);
                let stacked: Vec<&Mat> = hs.iter().collect();
                x.dim == 0 || (!hs.is_empty() && Mat::vstack(&stacked).rank() == x.dim)
            } else {
                let (prev, mid) = src(deg);
                let hs = annihilators(f, &mid, &prev, &reg);
                let common = if hs.is_empty() {
                    mid.dim
                } else {
                    mid.dim - Mat::vstack(&hs.iter().collect::<Vec<_>>()).rank()
                };
                common == prev.rank()
            };
            out.record(format!("K^{deg} is not torsionless"), !torsionless);
        }
        Verdict::Unknown { .. } => {
            out.record("unknown verdicts carry no certificate", false);
        }
    }
    out
}
