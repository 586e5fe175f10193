//! Bimodules, balanced tensor products and Hom-modules.
//!
//! Tensor products `M ⊗_A X` are presented as the quotient of `M ⊗_k X`
//! (pairs `(i, j)` at index `i * dim X + j`) by the span of
//! `m a ⊗ x - m ⊗ a x`, on the pivot-complement coordinates of the
//! relation matrix.

use std::sync::Arc;

use crate::algebra::{hom_space, Algebra, FDModule, HomSpace, ModuleHom};
use crate::error::{invalid, Error, Result};
use crate::linalg::{Field, Mat, Quotient};

/// `A`-`B`-bimodule: `left[i]` is `m -> b_i m` for `b_i` in `A`, `right[j]`
/// is `m -> m c_j` for `c_j` in `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    left_alg: Arc<Algebra>,
    right_alg: Arc<Algebra>,
    dim: usize,
    left: Arc<Vec<Mat>>,
    right: Arc<Vec<Mat>>,
}

impl Bimodule {
    pub fn new(left_alg: Arc<Algebra>, right_alg: Arc<Algebra>, left: Vec<Mat>, right: Vec<Mat>) -> Result<Bimodule> {
        let dim = left.first().or(right.first()).map(|m| m.rows()).unwrap_or(0);
        let b = Bimodule::new_unchecked(left_alg, right_alg, dim, left, right);
        b.validate()?;
        Ok(b)
    }

    pub fn new_unchecked(
        left_alg: Arc<Algebra>,
        right_alg: Arc<Algebra>,
        dim: usize,
        left: Vec<Mat>,
        right: Vec<Mat>,
    ) -> Bimodule {
        Bimodule { left_alg, right_alg, dim, left: Arc::new(left), right: Arc::new(right) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.left.len() != self.left_alg.dim() || self.right.len() != self.right_alg.dim() {
            return invalid("bimodule has the wrong number of action matrices");
        }
        self.as_left().validate().map_err(|e| Error::Invalid(format!("left action: {e}")))?;
        self.as_right().validate().map_err(|e| Error::Invalid(format!("right action: {e}")))?;
        for (i, l) in self.left.iter().enumerate() {
            for (j, r) in self.right.iter().enumerate() {
                if l.matmul(r) != r.matmul(l) {
                    return invalid(format!("left action of a{i} does not commute with right action of b{j}"));
                }
            }
        }
        Ok(())
    }

    /// `A` as an `A`-`A`-bimodule.
    pub fn regular(a: &Arc<Algebra>) -> Bimodule {
        Bimodule::new_unchecked(a.clone(), a.clone(), a.dim(), a.lefts().to_vec(), a.rights().to_vec())
    }

    pub fn zero(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Bimodule {
        let f = a.field();
        Bimodule::new_unchecked(
            a.clone(),
            b.clone(),
            0,
            vec![Mat::zero(f, 0, 0); a.dim()],
            vec![Mat::zero(f, 0, 0); b.dim()],
        )
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left_alg
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right_alg
    }

    pub fn field(&self) -> Field {
        self.left_alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_action(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    pub fn left_actions(&self) -> &[Mat] {
        &self.left
    }

    pub fn right_action(&self, j: usize) -> &Mat {
        &self.right[j]
    }

    pub fn right_actions(&self) -> &[Mat] {
        &self.right
    }

    /// Right action of an arbitrary element of `B`.
    pub fn right_by(&self, b: &Mat) -> Mat {
        lin(self.field(), self.dim, b, &self.right)
    }

    pub fn left_by(&self, a: &Mat) -> Mat {
        lin(self.field(), self.dim, a, &self.left)
    }

    /// Underlying left `A`-module.
    pub fn as_left(&self) -> FDModule {
        FDModule::new_unchecked(self.left_alg.clone(), self.dim, self.left.to_vec())
    }

    /// Underlying right `B`-module as a left `B^op`-module.
    pub fn as_right(&self) -> FDModule {
        FDModule::new_unchecked(self.right_alg.opposite_arc(), self.dim, self.right.to_vec())
    }

    /// The `B`-`A`-bimodule structure on the `k`-dual.
    pub fn dual(&self) -> Bimodule {
        Bimodule::new_unchecked(
            self.right_alg.clone(),
            self.left_alg.clone(),
            self.dim,
            self.right.iter().map(|m| m.transpose()).collect(),
            self.left.iter().map(|m| m.transpose()).collect(),
        )
    }

    /// Restrict both sides along algebra maps `a2 -> A` and `b2 -> B`.
    pub fn restrict(&self, a2: &Arc<Algebra>, fa: &Mat, b2: &Arc<Algebra>, fb: &Mat) -> Bimodule {
        let left = (0..a2.dim()).map(|i| self.left_by(&fa.col(i))).collect();
        let right = (0..b2.dim()).map(|j| self.right_by(&fb.col(j))).collect();
        Bimodule::new_unchecked(a2.clone(), b2.clone(), self.dim, left, right)
    }

    pub fn direct_sum(&self, o: &Bimodule) -> Bimodule {
        let left = self.left.iter().zip(o.left.iter()).map(|(a, b)| a.direct_sum(b)).collect();
        let right = self.right.iter().zip(o.right.iter()).map(|(a, b)| a.direct_sum(b)).collect();
        Bimodule::new_unchecked(self.left_alg.clone(), self.right_alg.clone(), self.dim + o.dim, left, right)
    }

    /// Sub-bimodule on an invariant subspace (columns of `basis`).
    pub fn sub(&self, basis: &Mat) -> Result<(Bimodule, Mat)> {
        let l = basis.left_inverse().ok_or_else(|| Error::Invalid("dependent basis".into()))?;
        let restrict = |ms: &[Mat]| -> Result<Vec<Mat>> {
            ms.iter()
                .map(|m| {
                    let img = m.matmul(basis);
                    let c = l.matmul(&img);
                    if basis.matmul(&c) != img {
                        return invalid("subspace is not a sub-bimodule");
                    }
                    Ok(c)
                })
                .collect()
        };
        let left = restrict(&self.left)?;
        let right = restrict(&self.right)?;
        Ok((
            Bimodule::new_unchecked(self.left_alg.clone(), self.right_alg.clone(), basis.cols(), left, right),
            basis.clone(),
        ))
    }

    pub fn quotient(&self, span: &Mat) -> (Bimodule, Quotient) {
        let q = Quotient::new(self.field(), self.dim, span);
        let left = self.left.iter().map(|m| q.proj.matmul(m).matmul(&q.lift)).collect();
        let right = self.right.iter().map(|m| q.proj.matmul(m).matmul(&q.lift)).collect();
        (Bimodule::new_unchecked(self.left_alg.clone(), self.right_alg.clone(), q.dim(), left, right), q)
    }
}

fn lin(f: Field, n: usize, x: &Mat, ms: &[Mat]) -> Mat {
    let mut acc = Mat::zero(f, n, n);
    for (i, m) in ms.iter().enumerate() {
        if !x.entry_is_zero(i, 0) {
            acc = acc.add(&m.scale(&x.get(i, 0)));
        }
    }
    acc
}

/// Relations `r a ⊗ x - r ⊗ a x` over the generators of `A`, as columns.
pub(crate) fn balance_relations(a: &Algebra, right: &[Mat], dr: usize, left: &[Mat], dx: usize) -> Mat {
    let f = a.field();
    let rels: Vec<Mat> = a
        .generators()
        .iter()
        .map(|&g| right[g].tensor_k(&Mat::identity(f, dx)).sub(&Mat::identity(f, dr).tensor_k(&left[g])))
        .collect();
    Mat::from_cols(f, dr * dx, &rels)
}

/// A tensor product presented as a quotient of the `k`-tensor space.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub quotient: Quotient,
    /// Dimensions of the two factors.
    pub dims: (usize, usize),
}

impl Tensor {
    pub fn new(a: &Algebra, right: &[Mat], dr: usize, left: &[Mat], dx: usize) -> Tensor {
        let rels = balance_relations(a, right, dr, left, dx);
        Tensor { quotient: Quotient::new(a.field(), dr * dx, &rels), dims: (dr, dx) }
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn proj(&self) -> &Mat {
        &self.quotient.proj
    }

    pub fn lift(&self) -> &Mat {
        &self.quotient.lift
    }

    /// Induce `u ⊗ v` between quotients from matrices on the factors.
    pub fn map_to(&self, target: &Tensor, u: &Mat, v: &Mat) -> Mat {
        target.proj().matmul(&u.tensor_k(v)).matmul(self.lift())
    }
}

/// `M ⊗_A X` as a `B`-module, for a `B`-`A`-bimodule `M`.
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub module: FDModule,
    pub tensor: Tensor,
}

pub fn tensor_over(m: &Bimodule, x: &FDModule) -> Result<TensorModule> {
    if !crate::algebra::same_alg(m.right_algebra(), x.algebra()) {
        return Err(Error::AlgebraMismatch("tensor_over: right algebra of M differs from that of X".into()));
    }
    let f = x.field();
    let t = Tensor::new(x.algebra(), m.right_actions(), m.dim(), x.actions(), x.dim());
    let idx = Mat::identity(f, x.dim());
    let action = m.left_actions().iter().map(|l| t.map_to(&t, l, &idx)).collect();
    let module = FDModule::new_unchecked(m.left_algebra().clone(), t.dim(), action);
    Ok(TensorModule { module, tensor: t })
}

/// `1_M ⊗ h : M ⊗ X -> M ⊗ X'`.
pub fn tensor_map(m: &Bimodule, h: &ModuleHom) -> Result<ModuleHom> {
    let s = tensor_over(m, &h.source)?;
    let t = tensor_over(m, &h.target)?;
    Ok(tensor_map_between(m, &s, &t, h))
}

pub fn tensor_map_between(m: &Bimodule, s: &TensorModule, t: &TensorModule, h: &ModuleHom) -> ModuleHom {
    let id = Mat::identity(m.field(), m.dim());
    let mat = s.tensor.map_to(&t.tensor, &id, &h.mat);
    ModuleHom::new_unchecked(s.module.clone(), t.module.clone(), mat)
}

/// `M ⊗_A N` for `B`-`A` and `A`-`C` bimodules, as a `B`-`C`-bimodule.
pub fn tensor_bimodules(m: &Bimodule, n: &Bimodule) -> Result<(Bimodule, Tensor)> {
    if !crate::algebra::same_alg(m.right_algebra(), n.left_algebra()) {
        return Err(Error::AlgebraMismatch("tensor of bimodules over different middle algebras".into()));
    }
    let f = m.field();
    let t = Tensor::new(n.left_algebra(), m.right_actions(), m.dim(), n.left_actions(), n.dim());
    let (im, inn) = (Mat::identity(f, m.dim()), Mat::identity(f, n.dim()));
    let left = m.left_actions().iter().map(|l| t.map_to(&t, l, &inn)).collect();
    let right = n.right_actions().iter().map(|r| t.map_to(&t, &im, r)).collect();
    Ok((Bimodule::new_unchecked(m.left_algebra().clone(), n.right_algebra().clone(), t.dim(), left, right), t))
}

/// Bimodule maps `M -> N`, computed as module maps over `A ⊗_k B^op`.
pub fn bimodule_hom_space(m: &Bimodule, n: &Bimodule) -> Result<HomSpace> {
    if !crate::algebra::same_alg(m.left_algebra(), n.left_algebra())
        || !crate::algebra::same_alg(m.right_algebra(), n.right_algebra())
    {
        return Err(Error::AlgebraMismatch("bimodule maps between bimodules over different algebras".into()));
    }
    let env = Arc::new(m.left_algebra().tensor(&m.right_algebra().opposite()));
    let as_env = |x: &Bimodule| {
        let action = x.left.iter().flat_map(|l| x.right.iter().map(move |r| l.matmul(r))).collect();
        FDModule::new_unchecked(env.clone(), x.dim, action)
    };
    hom_space(&as_env(m), &as_env(n))
}

/// `r ⊗_A X` as a vector space, `r` a right `A`-module given over `A^op`.
pub fn tensor_right_left(r: &FDModule, x: &FDModule) -> Tensor {
    Tensor::new(x.algebra(), r.actions(), r.dim(), x.actions(), x.dim())
}

/// `Hom_A(N, X)` with `(b f)(n) = f(n b)`, for an `A`-`B`-bimodule `N`.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: FDModule,
    pub space: HomSpace,
    /// Left inverse of the flattened hom basis, for coordinates.
    coords: Mat,
}

impl HomModule {
    /// Coordinates of a hom `N -> X` given as a matrix.
    pub fn coords_of(&self, m: &Mat) -> Mat {
        self.coords.matmul(&m.vectorize())
    }

    /// The hom with the given coordinate vector.
    pub fn hom_of(&self, c: &Mat) -> Mat {
        let f = self.module.field();
        let mut acc = Mat::zero(f, self.space.target.dim(), self.space.source.dim());
        for (t, b) in self.space.basis.iter().enumerate() {
            if !c.entry_is_zero(t, 0) {
                acc = acc.add(&b.scale(&c.get(t, 0)));
            }
        }
        acc
    }
}

pub fn hom_module(n: &Bimodule, x: &FDModule) -> Result<HomModule> {
    if !crate::algebra::same_alg(n.left_algebra(), x.algebra()) {
        return Err(Error::AlgebraMismatch("hom_module: left algebra of N differs from that of X".into()));
    }
    let f = x.field();
    let space = hom_space(&n.as_left(), x)?;
    let bm = space.basis_matrix();
    let coords = bm.left_inverse().expect("hom basis is independent");
    let action = n
        .right_actions()
        .iter()
        .map(|r| {
            let cols: Vec<Mat> = space.basis.iter().map(|h| coords.matmul(&h.matmul(r).vectorize())).collect();
            Mat::from_cols(f, space.dim(), &cols)
        })
        .collect();
    let module = FDModule::new_unchecked(n.right_algebra().clone(), space.dim(), action);
    Ok(HomModule { module, space, coords })
}

/// `Hom(N, h) : Hom(N, X) -> Hom(N, X')`, `f -> h ∘ f`.
pub fn hom_map(n: &Bimodule, h: &ModuleHom) -> Result<ModuleHom> {
    let s = hom_module(n, &h.source)?;
    let t = hom_module(n, &h.target)?;
    Ok(hom_map_between(&s, &t, h))
}

pub fn hom_map_between(s: &HomModule, t: &HomModule, h: &ModuleHom) -> ModuleHom {
    let f = h.source.field();
    let cols: Vec<Mat> = s.space.basis.iter().map(|b| t.coords_of(&h.mat.matmul(b))).collect();
    ModuleHom::new_unchecked(s.module.clone(), t.module.clone(), Mat::from_cols(f, t.module.dim(), &cols))
}

/// A map `M ⊗_k N -> T` stored on the full `k`-tensor space (`dim T x
/// dim M * dim N`), required to be balanced over the middle algebra and a
/// bimodule map for the outer actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedMap {
    pub source: (Bimodule, Bimodule),
    pub target: Bimodule,
    pub mat: Mat,
}

impl BalancedMap {
    pub fn new(m: Bimodule, n: Bimodule, target: Bimodule, mat: Mat) -> Result<BalancedMap> {
        let b = BalancedMap { source: (m, n), target, mat };
        b.validate()?;
        Ok(b)
    }

    pub fn new_unchecked(m: Bimodule, n: Bimodule, target: Bimodule, mat: Mat) -> BalancedMap {
        BalancedMap { source: (m, n), target, mat }
    }

    pub fn zero(m: &Bimodule, n: &Bimodule, target: &Bimodule) -> BalancedMap {
        let mat = Mat::zero(m.field(), target.dim(), m.dim() * n.dim());
        BalancedMap::new_unchecked(m.clone(), n.clone(), target.clone(), mat)
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n) = &self.source;
        let f = m.field();
        if self.mat.rows() != self.target.dim() || self.mat.cols() != m.dim() * n.dim() {
            return invalid("balanced map has the wrong shape");
        }
        if !crate::algebra::same_alg(m.right_algebra(), n.left_algebra())
            || !crate::algebra::same_alg(m.left_algebra(), self.target.left_algebra())
            || !crate::algebra::same_alg(n.right_algebra(), self.target.right_algebra())
        {
            return Err(Error::AlgebraMismatch("balanced map between incompatible bimodules".into()));
        }
        let rels = balance_relations(n.left_algebra(), m.right_actions(), m.dim(), n.left_actions(), n.dim());
        if !self.mat.matmul(&rels).is_zero() {
            return invalid("map is not balanced over the middle algebra");
        }
        let (im, inn) = (Mat::identity(f, m.dim()), Mat::identity(f, n.dim()));
        for (i, l) in m.left_actions().iter().enumerate() {
            if self.mat.matmul(&l.tensor_k(&inn)) != self.target.left_action(i).matmul(&self.mat) {
                return invalid(format!("map is not left linear at basis element {i}"));
            }
        }
        for (j, r) in n.right_actions().iter().enumerate() {
            if self.mat.matmul(&im.tensor_k(r)) != self.target.right_action(j).matmul(&self.mat) {
                return invalid(format!("map is not right linear at basis element {j}"));
            }
        }
        Ok(())
    }

    /// Value on `e_i ⊗ e_j`.
    pub fn eval(&self, i: usize, j: usize) -> Mat {
        self.mat.col(i * self.source.1.dim() + j)
    }

    /// Induced map on `M ⊗_A N` in the given tensor presentation.
    pub fn on_tensor(&self, t: &Tensor) -> Mat {
        self.mat.matmul(t.lift())
    }
}
