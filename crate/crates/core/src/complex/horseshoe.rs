use crate::algebra::{ext_group, hom_space, FDModule, HomSpace, ModuleHom};
use crate::error::{invalid, Error, Result};
use crate::linalg::Mat;

use super::{AnchoredWindow, ComplexWindow};

#[derive(Clone, Debug)]
pub struct Horseshoe {
    /// `Z^i = X^i ⊕ Y^i` with `d_Z^i = [[d_X^i, ρ^i], [0, d_Y^i]]`.
    pub complex: AnchoredWindow,
    /// `ρ^i : Y^i -> X^{i+1}` for `lo <= i < hi`.
    pub rho: Vec<ModuleHom>,
}

fn check_ext(what: &str, degree: i64, a: &FDModule, b: &FDModule) -> Result<()> {
    if ext_group(a, b, 1)? != 0 {
        return Err(Error::Hypothesis { what: what.into(), degree });
    }
    Ok(())
}

/// Unknown coefficients of a family of homs, each ranging over a Hom space.
struct Unknowns {
    spaces: Vec<HomSpace>,
    offsets: Vec<usize>,
    total: usize,
}

impl Unknowns {
    fn new(spaces: Vec<HomSpace>) -> Unknowns {
        let mut offsets = Vec::with_capacity(spaces.len());
        let mut total = 0;
        for s in &spaces {
            offsets.push(total);
            total += s.dim();
        }
        Unknowns { spaces, offsets, total }
    }

    fn value(&self, k: usize, sol: &Mat) -> Mat {
        let s = &self.spaces[k];
        let c: Vec<_> = (0..s.dim()).map(|t| sol.get(self.offsets[k] + t, 0)).collect();
        s.combination(&c).mat
    }
}

/// Linear equations `Σ L_k U_k R_k = C` in the unknown homs `U_k`.
struct System {
    blocks: Vec<(Vec<Mat>, Mat)>,
}

impl System {
    /// Add one matrix equation from `(k, L, R)` terms and a constant.
    fn push(&mut self, u: &Unknowns, terms: &[(usize, Mat, Mat)], rhs: Mat) {
        let f = rhs.field();
        let mut cols = vec![Mat::zero(f, rhs.rows() * rhs.cols(), 1); u.total];
        for (k, l, r) in terms {
            for (t, b) in u.spaces[*k].basis.iter().enumerate() {
                let v = l.matmul(b).matmul(r).vectorize();
                let idx = u.offsets[*k] + t;
                cols[idx] = cols[idx].add(&v);
            }
        }
        self.blocks.push((cols, rhs.vectorize()));
    }

    fn solve(&self, u: &Unknowns) -> Result<Option<Mat>> {
        let f = match self.blocks.first() {
            Some((_, r)) => r.field(),
            None => return Ok(None),
        };
        let rows: usize = self.blocks.iter().map(|(_, r)| r.rows()).sum();
        let cols: Vec<Mat> = (0..u.total)
            .map(|t| Mat::vstack(&self.blocks.iter().map(|(c, _)| &c[t]).collect::<Vec<_>>()))
            .collect();
        let a = Mat::from_cols(f, rows, &cols);
        let b = Mat::vstack(&self.blocks.iter().map(|(_, r)| r).collect::<Vec<_>>());
        Ok(a.solve(&b)?)
    }
}

/// Horseshoe lemma: glue resolutions of `U` and `V` along `0 -> U -> W -> V -> 0`.
/// The two windows must share their degree range, which must contain `0`
/// in its interior.
pub fn horseshoe(inc: &ModuleHom, proj: &ModuleHom, xc: &AnchoredWindow, yc: &AnchoredWindow) -> Result<Horseshoe> {
    let (x, y) = (&xc.window, &yc.window);
    if x.lo != y.lo || x.hi() != y.hi() || x.lo >= 0 || x.hi() <= 0 {
        return invalid("horseshoe windows must share a range with 0 in the interior");
    }
    if inc.target != proj.source || !inc.is_injective() || !proj.is_surjective() || !proj.mat.matmul(&inc.mat).is_zero()
    {
        return invalid("not a short exact sequence");
    }
    if inc.source.dim() + proj.target.dim() != inc.target.dim() {
        return invalid("not a short exact sequence");
    }
    if xc.kernel.source != inc.source || yc.kernel.source != proj.target {
        return invalid("window kernels differ from the ends of the sequence");
    }
    if !x.is_exact_interior() || !y.is_exact_interior() {
        return invalid("horseshoe windows must be exact");
    }
    let (lo, hi) = (x.lo, x.hi());
    for i in 0..hi {
        let (k, _) = y.diff(i).kernel();
        check_ext("Ext^1(Ker d_Y^i, X^i) = 0", i, &k, x.term(i))?;
    }
    for i in 1..=(-lo - 1) {
        let (im, _, _) = x.diff(-i).image();
        check_ext("Ext^1(Y^{-i}, Im d_X^{-i}) = 0", -i, y.term(-i), &im)?;
    }

    let f = inc.mat.field();
    let w = &inc.target;
    let n = (hi - lo) as usize;
    let mut spaces = Vec::with_capacity(n + 1);
    for t in 0..n {
        let i = lo + t as i64;
        spaces.push(hom_space(y.term(i), x.term(i + 1))?);
    }
    spaces.push(hom_space(w, x.term(0))?);
    let u = Unknowns::new(spaces);
    let sigma = n;
    let mut sys = System { blocks: vec![] };
    for t in 0..n.saturating_sub(1) {
        let i = lo + t as i64;
        // d_X^{i+1} ρ^i + ρ^{i+1} d_Y^i = 0
        let dx = x.diff(i + 1).mat.clone();
        let dy = y.diff(i).mat.clone();
        let id_y = Mat::identity(f, y.term(i).dim());
        let id_x = Mat::identity(f, x.term(i + 2).dim());
        sys.push(&u, &[(t, dx, id_y), (t + 1, id_x, dy)], Mat::zero(f, x.term(i + 2).dim(), y.term(i).dim()));
    }
    // σ ι_U = κ_X and d_X^0 σ + ρ^0 κ_Y π = 0
    let x0 = x.term(0).dim();
    sys.push(&u, &[(sigma, Mat::identity(f, x0), inc.mat.clone())], xc.kernel.mat.clone());
    let t0 = (-lo) as usize;
    let kp = yc.kernel.mat.matmul(&proj.mat);
    sys.push(
        &u,
        &[(sigma, x.diff(0).mat.clone(), Mat::identity(f, w.dim())), (t0, Mat::identity(f, x.term(1).dim()), kp.clone())],
        Mat::zero(f, x.term(1).dim(), w.dim()),
    );
    let Some(sol) = sys.solve(&u)? else {
        return Err(Error::Verification("horseshoe lifting equations have no solution".into()));
    };

    let rho: Vec<ModuleHom> = (0..n)
        .map(|t| {
            let i = lo + t as i64;
            ModuleHom::new_unchecked(y.term(i).clone(), x.term(i + 1).clone(), u.value(t, &sol))
        })
        .collect();
    let terms: Vec<FDModule> = (lo..=hi).map(|i| x.term(i).direct_sum(y.term(i))).collect();
    let diffs: Vec<ModuleHom> = (0..n)
        .map(|t| {
            let i = lo + t as i64;
            let (dx, dy) = (&x.diff(i).mat, &y.diff(i).mat);
            let mut d = Mat::zero(f, dx.rows() + dy.rows(), dx.cols() + dy.cols());
            d.put(0, 0, dx);
            d.put(0, dx.cols(), &rho[t].mat);
            d.put(dx.rows(), dx.cols(), dy);
            ModuleHom::new_unchecked(terms[t].clone(), terms[t + 1].clone(), d)
        })
        .collect();
    let kernel_mat = Mat::vstack(&[&u.value(sigma, &sol), &kp]);
    let z = ComplexWindow::new(lo, terms.clone(), diffs)?;
    let kernel = ModuleHom::new(w.clone(), terms[t0].clone(), kernel_mat)?;
    if !z.is_exact_interior() || !kernel.is_injective() || kernel.rank() + z.diff(0).rank() != terms[t0].dim() {
        return Err(Error::Verification("horseshoe complex fails exactness".into()));
    }
    Ok(Horseshoe { complex: AnchoredWindow { window: z, kernel }, rho })
}
