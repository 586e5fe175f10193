use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::linalg::{Field, Mat, Quotient, Scalar};

use super::Algebra;

/// Finite-dimensional left module, one action matrix per basis element of
/// the algebra. Right modules are left modules over the opposite algebra.
#[derive(Clone, Debug)]
pub struct FDModule {
    alg: Arc<Algebra>,
    dim: usize,
    action: Arc<Vec<Mat>>,
}

impl PartialEq for FDModule {
    fn eq(&self, o: &FDModule) -> bool {
        self.same_algebra(o) && self.dim == o.dim && self.action == o.action
    }
}
impl Eq for FDModule {}

pub(crate) fn same_alg(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FDModule {
    pub fn new(alg: Arc<Algebra>, action: Vec<Mat>) -> Result<FDModule> {
        if action.len() != alg.dim() {
            return invalid(format!("{} action matrices for an algebra of dimension {}", action.len(), alg.dim()));
        }
        let dim = action.first().map(|m| m.rows()).unwrap_or(0);
        let m = FDModule::new_unchecked(alg, dim, action);
        m.validate()?;
        Ok(m)
    }

    pub fn new_unchecked(alg: Arc<Algebra>, dim: usize, action: Vec<Mat>) -> FDModule {
        FDModule { alg, dim, action: Arc::new(action) }
    }

    pub fn zero(alg: &Arc<Algebra>) -> FDModule {
        let f = alg.field();
        FDModule::new_unchecked(alg.clone(), 0, vec![Mat::zero(f, 0, 0); alg.dim()])
    }

    /// `A` acting on itself from the left.
    pub fn regular(alg: &Arc<Algebra>) -> FDModule {
        FDModule::new_unchecked(alg.clone(), alg.dim(), alg.lefts().to_vec())
    }

    /// `A` as a right module, i.e. a left module over `op` (which must be
    /// the opposite of `alg`).
    pub fn right_regular(alg: &Arc<Algebra>, op: &Arc<Algebra>) -> FDModule {
        FDModule::new_unchecked(op.clone(), alg.dim(), alg.rights().to_vec())
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.alg;
        let f = a.field();
        if self.action.len() != a.dim() {
            return invalid("wrong number of action matrices");
        }
        for m in self.action.iter() {
            if m.rows() != self.dim || m.cols() != self.dim {
                return invalid("action matrix has the wrong size");
            }
            if m.field() != f {
                return Err(Error::Linalg(crate::linalg::LinalgError::FieldMismatch(f, m.field())));
            }
        }
        if !self.act_by(a.unit()).is_identity() {
            return invalid("unit does not act as the identity");
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = self.action[i].matmul(&self.action[j]);
                let rhs = self.act_by(&a.left(i).col(j));
                if lhs != rhs {
                    return invalid(format!("action is not multiplicative at basis pair ({i}, {j})"));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn action(&self, i: usize) -> &Mat {
        &self.action[i]
    }

    pub fn actions(&self) -> &[Mat] {
        &self.action
    }

    /// Action of an arbitrary algebra element.
    pub fn act_by(&self, a: &Mat) -> Mat {
        let mut acc = Mat::zero(self.field(), self.dim, self.dim);
        for (i, m) in self.action.iter().enumerate() {
            if !a.entry_is_zero(i, 0) {
                acc = acc.add(&m.scale(&a.get(i, 0)));
            }
        }
        acc
    }

    pub fn same_algebra(&self, o: &FDModule) -> bool {
        same_alg(&self.alg, &o.alg)
    }

    pub(crate) fn check_same(&self, o: &FDModule, ctx: &str) -> Result<()> {
        if self.same_algebra(o) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(ctx.to_string()))
        }
    }

    /// The same vector space over another (equal) algebra handle.
    pub fn with_algebra(&self, alg: &Arc<Algebra>) -> FDModule {
        FDModule { alg: alg.clone(), dim: self.dim, action: self.action.clone() }
    }

    /// `k`-linear dual with transposed actions, a module over `op`.
    pub fn dual(&self, op: &Arc<Algebra>) -> FDModule {
        FDModule::new_unchecked(op.clone(), self.dim, self.action.iter().map(|m| m.transpose()).collect())
    }

    /// Restriction along an algebra map `to -> self.algebra()` given by its
    /// matrix (`dim A x dim to`).
    pub fn restrict(&self, to: &Arc<Algebra>, phi: &Mat) -> FDModule {
        let action = (0..to.dim()).map(|j| self.act_by(&phi.col(j))).collect();
        FDModule::new_unchecked(to.clone(), self.dim, action)
    }

    /// Change of basis: `p` has the new basis vectors as columns.
    pub fn transport(&self, p: &Mat) -> Result<(FDModule, ModuleHom)> {
        let Some(pinv) = p.inverse() else { return invalid("transport along a singular matrix") };
        let action = self.action.iter().map(|m| pinv.matmul(m).matmul(p)).collect();
        let y = FDModule::new_unchecked(self.alg.clone(), self.dim, action);
        let h = ModuleHom::new_unchecked(self.clone(), y.clone(), pinv);
        Ok((y, h))
    }

    pub fn direct_sum(&self, o: &FDModule) -> FDModule {
        let action = self.action.iter().zip(o.action.iter()).map(|(a, b)| a.direct_sum(b)).collect();
        FDModule::new_unchecked(self.alg.clone(), self.dim + o.dim, action)
    }

    /// Direct sum of a list with its canonical injections and projections.
    pub fn direct_sum_all(alg: &Arc<Algebra>, parts: &[FDModule]) -> (FDModule, Vec<ModuleHom>, Vec<ModuleHom>) {
        let f = alg.field();
        let total: usize = parts.iter().map(|p| p.dim).sum();
        let action: Vec<Mat> = (0..alg.dim())
            .map(|i| {
                let blocks: Vec<&Mat> = parts.iter().map(|p| &p.action[i]).collect();
                if blocks.is_empty() {
                    Mat::zero(f, 0, 0)
                } else {
                    Mat::block_diag(&blocks)
                }
            })
            .collect();
        let sum = FDModule::new_unchecked(alg.clone(), total, action);
        let mut inj = Vec::new();
        let mut proj = Vec::new();
        let mut off = 0;
        for p in parts {
            let mut i = Mat::zero(f, total, p.dim);
            i.put(off, 0, &Mat::identity(f, p.dim));
            proj.push(ModuleHom::new_unchecked(sum.clone(), p.clone(), i.transpose()));
            inj.push(ModuleHom::new_unchecked(p.clone(), sum.clone(), i));
            off += p.dim;
        }
        (sum, inj, proj)
    }

    pub fn power(&self, n: usize) -> FDModule {
        let parts = vec![self.clone(); n];
        FDModule::direct_sum_all(&self.alg, &parts).0
    }

    /// Submodule spanned by the columns of `basis` (which must be
    /// independent and invariant), with its inclusion.
    pub fn submodule(&self, basis: &Mat) -> Result<(FDModule, ModuleHom)> {
        let Some(l) = basis.left_inverse() else { return invalid("submodule basis is dependent") };
        let mut action = Vec::with_capacity(self.alg.dim());
        for m in self.action.iter() {
            let img = m.matmul(basis);
            let c = l.matmul(&img);
            if basis.matmul(&c) != img {
                return invalid("subspace is not invariant under the action");
            }
            action.push(c);
        }
        let s = FDModule::new_unchecked(self.alg.clone(), basis.cols(), action);
        let inc = ModuleHom::new_unchecked(s.clone(), self.clone(), basis.clone());
        Ok((s, inc))
    }

    /// Quotient by the invariant subspace spanned by the columns of `span`.
    pub fn quotient(&self, span: &Mat) -> (FDModule, ModuleHom) {
        let q = Quotient::new(self.field(), self.dim, span);
        let action = self.action.iter().map(|m| q.proj.matmul(m).matmul(&q.lift)).collect();
        let m = FDModule::new_unchecked(self.alg.clone(), q.dim(), action);
        let p = ModuleHom::new_unchecked(self.clone(), m.clone(), q.proj);
        (m, p)
    }

    /// Basis of the submodule generated by the columns of `vecs`.
    pub fn generated_by(&self, vecs: &Mat) -> Mat {
        if vecs.cols() == 0 {
            return Mat::zero(self.field(), self.dim, 0);
        }
        let parts: Vec<Mat> = self.action.iter().map(|m| m.matmul(vecs)).collect();
        Mat::from_cols(self.field(), self.dim, &parts).image_basis()
    }

    /// Basis of `L X` for a subspace `L` of the algebra (given by columns).
    pub fn ideal_times(&self, ideal: &Mat) -> Mat {
        let parts: Vec<Mat> = (0..ideal.cols()).map(|t| self.act_by(&ideal.col(t))).collect();
        Mat::from_cols(self.field(), self.dim, &parts).image_basis()
    }
}

/// Module homomorphism; `mat` is `dim target x dim source` acting on
/// column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleHom {
    pub source: FDModule,
    pub target: FDModule,
    pub mat: Mat,
}

impl ModuleHom {
    pub fn new(source: FDModule, target: FDModule, mat: Mat) -> Result<ModuleHom> {
        source.check_same(&target, "hom between modules over different algebras")?;
        if mat.rows() != target.dim() || mat.cols() != source.dim() {
            return invalid(format!(
                "hom matrix is {}x{}, expected {}x{}",
                mat.rows(),
                mat.cols(),
                target.dim(),
                source.dim()
            ));
        }
        let h = ModuleHom { source, target, mat };
        if !h.intertwines() {
            return invalid("matrix does not commute with the action");
        }
        Ok(h)
    }

    pub fn new_unchecked(source: FDModule, target: FDModule, mat: Mat) -> ModuleHom {
        ModuleHom { source, target, mat }
    }

    pub fn intertwines(&self) -> bool {
        self.source.algebra().generators().iter().all(|&i| {
            self.target.action(i).matmul(&self.mat) == self.mat.matmul(self.source.action(i))
        })
    }

    pub fn identity(x: &FDModule) -> ModuleHom {
        ModuleHom::new_unchecked(x.clone(), x.clone(), Mat::identity(x.field(), x.dim()))
    }

    pub fn zero(x: &FDModule, y: &FDModule) -> ModuleHom {
        ModuleHom::new_unchecked(x.clone(), y.clone(), Mat::zero(x.field(), y.dim(), x.dim()))
    }

    /// `self` followed by `g`, i.e. `g ∘ self`.
    pub fn then(&self, g: &ModuleHom) -> Result<ModuleHom> {
        if self.target.dim() != g.source.dim() || !self.target.same_algebra(&g.source) {
            return invalid("composition of non-composable homs");
        }
        Ok(ModuleHom::new_unchecked(self.source.clone(), g.target.clone(), g.mat.matmul(&self.mat)))
    }

    pub fn add(&self, o: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.mat.add(&o.mat))
    }

    pub fn sub(&self, o: &ModuleHom) -> ModuleHom {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.mat.sub(&o.mat))
    }

    pub fn scale(&self, s: &Scalar) -> ModuleHom {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.mat.scale(s))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }

    pub fn is_injective(&self) -> bool {
        self.mat.is_injective()
    }

    pub fn is_surjective(&self) -> bool {
        self.mat.is_surjective()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim() && self.mat.is_invertible()
    }

    pub fn inverse(&self) -> Option<ModuleHom> {
        let inv = self.mat.inverse()?;
        Some(ModuleHom::new_unchecked(self.target.clone(), self.source.clone(), inv))
    }

    pub fn kernel(&self) -> (FDModule, ModuleHom) {
        let k = self.mat.kernel_basis();
        self.source.submodule(&k).expect("kernel is a submodule")
    }

    pub fn cokernel(&self) -> (FDModule, ModuleHom) {
        self.target.quotient(&self.mat)
    }

    /// Image with its inclusion into the target and the corestriction.
    pub fn image(&self) -> (FDModule, ModuleHom, ModuleHom) {
        let b = self.mat.image_basis();
        let (im, inc) = self.target.submodule(&b).expect("image is a submodule");
        let l = b.left_inverse().expect("independent");
        let co = ModuleHom::new_unchecked(self.source.clone(), im.clone(), l.matmul(&self.mat));
        (im, inc, co)
    }

    /// Factor `self` through an injective `inc` with the same target.
    pub fn factor_through_mono(&self, inc: &ModuleHom) -> Option<ModuleHom> {
        let x = inc.mat.solve(&self.mat).ok()??;
        Some(ModuleHom::new_unchecked(self.source.clone(), inc.source.clone(), x))
    }

    /// Factor `self` through a surjective `p` with the same source, giving
    /// `h` with `p.then(h) = self`; `None` if `ker p` is not killed.
    pub fn factor_through_epi(&self, p: &ModuleHom) -> Option<ModuleHom> {
        let x = p.mat.transpose().solve(&self.mat.transpose()).ok()??;
        Some(ModuleHom::new_unchecked(p.target.clone(), self.target.clone(), x.transpose()))
    }
}

pub fn kernel_of(h: &ModuleHom) -> (FDModule, ModuleHom) {
    h.kernel()
}

pub fn cokernel_of(h: &ModuleHom) -> (FDModule, ModuleHom) {
    h.cokernel()
}

pub fn image_of(h: &ModuleHom) -> (FDModule, ModuleHom, ModuleHom) {
    h.image()
}

/// Basis of `Hom_A(X, Y)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: FDModule,
    pub target: FDModule,
    pub basis: Vec<Mat>,
}

/// Coefficient matrix of the intertwining equations on row-major `vec(F)`.
pub(crate) fn intertwining_system(x: &FDModule, y: &FDModule) -> Mat {
    let f = x.field();
    let (dx, dy) = (x.dim(), y.dim());
    let eqs: Vec<Mat> = x
        .algebra()
        .generators()
        .iter()
        .map(|&g| {
            y.action(g)
                .tensor_k(&Mat::identity(f, dx))
                .sub(&Mat::identity(f, dy).tensor_k(&x.action(g).transpose()))
        })
        .collect();
    Mat::from_rows_of(f, dx * dy, &eqs)
}

pub fn hom_space(x: &FDModule, y: &FDModule) -> Result<HomSpace> {
    x.check_same(y, "hom space between modules over different algebras")?;
    let (dx, dy) = (x.dim(), y.dim());
    let k = intertwining_system(x, y).kernel_basis();
    let basis = (0..k.cols()).map(|t| k.col(t).reshape(dy, dx)).collect();
    Ok(HomSpace { source: x.clone(), target: y.clone(), basis })
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn hom(&self, i: usize) -> ModuleHom {
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), self.basis[i].clone())
    }

    pub fn homs(&self) -> Vec<ModuleHom> {
        (0..self.dim()).map(|i| self.hom(i)).collect()
    }

    pub fn combination(&self, coeffs: &[Scalar]) -> ModuleHom {
        let f = self.source.field();
        let terms: Vec<(Scalar, &Mat)> = coeffs.iter().cloned().zip(self.basis.iter()).collect();
        let m = Mat::lin_comb(f, self.target.dim(), self.source.dim(), &terms);
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), m)
    }

    /// Basis homs flattened row-major as the columns of one matrix.
    pub fn basis_matrix(&self) -> Mat {
        let f = self.source.field();
        let cols: Vec<Mat> = self.basis.iter().map(|m| m.vectorize()).collect();
        Mat::from_cols(f, self.source.dim() * self.target.dim(), &cols)
    }

    /// Coordinates of a matrix in this basis, if it is an intertwiner.
    pub fn coords(&self, m: &Mat) -> Option<Vec<Scalar>> {
        let x = self.basis_matrix().solve(&m.vectorize()).ok()??;
        Some((0..x.rows()).map(|i| x.get(i, 0)).collect())
    }
}
