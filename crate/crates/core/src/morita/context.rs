use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebra::{validate_algebra, Algebra};
use crate::bimodule::{BalancedMap, Bimodule};
use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};

/// Failure of the Morita context axioms, with basis indices of a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextViolation {
    Component(String),
    Phi(String),
    Psi(String),
    /// `ψ(n ⊗ m) n' != n φ(m ⊗ n')`.
    LeftSquare { n: usize, m: usize, n2: usize },
    /// `φ(m ⊗ n) m' != m ψ(n ⊗ m')`.
    RightSquare { m: usize, n: usize, m2: usize },
    /// With `φ = 0`, one of `IN = 0`, `MI = 0`, `I^2 = 0` fails.
    ZeroPhiIdeal(&'static str),
}

impl fmt::Display for ContextViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextViolation::Component(s) => write!(f, "invalid component: {s}"),
            ContextViolation::Phi(s) => write!(f, "phi: {s}"),
            ContextViolation::Psi(s) => write!(f, "psi: {s}"),
            ContextViolation::LeftSquare { n, m, n2 } => {
                write!(f, "psi(n{n} ⊗ m{m}) n{n2} differs from n{n} phi(m{m} ⊗ n{n2})")
            }
            ContextViolation::RightSquare { m, n, m2 } => {
                write!(f, "phi(m{m} ⊗ n{n}) m{m2} differs from m{m} psi(n{n} ⊗ m{m2})")
            }
            ContextViolation::ZeroPhiIdeal(s) => write!(f, "phi = 0 but {s} fails"),
        }
    }
}

impl From<ContextViolation> for Error {
    fn from(v: ContextViolation) -> Error {
        Error::Invalid(v.to_string())
    }
}

/// A Morita context `(A, B, M, N, φ, ψ)` with `M` a `B`-`A`-bimodule, `N` an
/// `A`-`B`-bimodule, `φ : M ⊗_A N -> B` and `ψ : N ⊗_B M -> A`.
#[derive(Debug)]
pub struct MoritaContext {
    pub a: Arc<Algebra>,
    pub b: Arc<Algebra>,
    pub m: Bimodule,
    pub n: Bimodule,
    pub phi: BalancedMap,
    pub psi: BalancedMap,
    i_basis: Mat,
    j_basis: Mat,
    ring: OnceLock<Result<MoritaRing>>,
    op: OnceLock<Arc<MoritaContext>>,
}

impl MoritaContext {
    /// Assemble and validate. `phi` is `dim B x (dim M * dim N)`, `psi` is
    /// `dim A x (dim N * dim M)`, both on the `k`-tensor bases.
    pub fn new(a: Arc<Algebra>, b: Arc<Algebra>, m: Bimodule, n: Bimodule, phi: Mat, psi: Mat) -> Result<Arc<MoritaContext>> {
        let ctx = MoritaContext::new_unchecked(a, b, m, n, phi, psi);
        ctx.validate()?;
        Ok(Arc::new(ctx))
    }

    pub fn new_unchecked(a: Arc<Algebra>, b: Arc<Algebra>, m: Bimodule, n: Bimodule, phi: Mat, psi: Mat) -> MoritaContext {
        let i_basis = psi.image_basis();
        let j_basis = phi.image_basis();
        let phi = BalancedMap::new_unchecked(m.clone(), n.clone(), Bimodule::regular(&b), phi);
        let psi = BalancedMap::new_unchecked(n.clone(), m.clone(), Bimodule::regular(&a), psi);
        MoritaContext { a, b, m, n, phi, psi, i_basis, j_basis, ring: OnceLock::new(), op: OnceLock::new() }
    }

    /// Context with both maps zero.
    pub fn zero_maps(a: Arc<Algebra>, b: Arc<Algebra>, m: Bimodule, n: Bimodule) -> Result<Arc<MoritaContext>> {
        let f = a.field();
        let phi = Mat::zero(f, b.dim(), m.dim() * n.dim());
        let psi = Mat::zero(f, a.dim(), n.dim() * m.dim());
        MoritaContext::new(a, b, m, n, phi, psi)
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    /// Basis of `I = Im ψ` in `A`.
    pub fn i_basis(&self) -> &Mat {
        &self.i_basis
    }

    /// Basis of `J = Im φ` in `B`.
    pub fn j_basis(&self) -> &Mat {
        &self.j_basis
    }

    pub fn phi_is_zero(&self) -> bool {
        self.phi.is_zero()
    }

    pub fn psi_is_zero(&self) -> bool {
        self.psi.is_zero()
    }

    pub fn validate(&self) -> std::result::Result<(), ContextViolation> {
        use ContextViolation::*;
        validate_algebra(&self.a).map_err(|v| Component(format!("A: {v}")))?;
        validate_algebra(&self.b).map_err(|v| Component(format!("B: {v}")))?;
        let ok = |x: &Arc<Algebra>, y: &Arc<Algebra>| crate::algebra::same_alg(x, y);
        if !ok(self.m.left_algebra(), &self.b) || !ok(self.m.right_algebra(), &self.a) {
            return Err(Component("M is not a B-A-bimodule".into()));
        }
        if !ok(self.n.left_algebra(), &self.a) || !ok(self.n.right_algebra(), &self.b) {
            return Err(Component("N is not an A-B-bimodule".into()));
        }
        self.m.validate().map_err(|e| Component(format!("M: {e}")))?;
        self.n.validate().map_err(|e| Component(format!("N: {e}")))?;
        self.phi.validate().map_err(|e| Phi(e.to_string()))?;
        self.psi.validate().map_err(|e| Psi(e.to_string()))?;
        let (dm, dn) = (self.m.dim(), self.n.dim());
        for s in 0..dn {
            for i in 0..dm {
                let lhs_act = self.n.left_by(&self.psi.eval(s, i));
                for t in 0..dn {
                    let lhs = lhs_act.col(t);
                    let rhs = self.n.right_by(&self.phi.eval(i, t)).col(s);
                    if lhs != rhs {
                        return Err(LeftSquare { n: s, m: i, n2: t });
                    }
                }
            }
        }
        for i in 0..dm {
            for s in 0..dn {
                let lhs_act = self.m.left_by(&self.phi.eval(i, s));
                for j in 0..dm {
                    let lhs = lhs_act.col(j);
                    let rhs = self.m.right_by(&self.psi.eval(s, j)).col(i);
                    if lhs != rhs {
                        return Err(RightSquare { m: i, n: s, m2: j });
                    }
                }
            }
        }
        if self.phi_is_zero() {
            let ib = &self.i_basis;
            for c in 0..ib.cols() {
                let x = ib.col(c);
                if !self.n.left_by(&x).is_zero() {
                    return Err(ZeroPhiIdeal("I N = 0"));
                }
                if !self.m.right_by(&x).is_zero() {
                    return Err(ZeroPhiIdeal("M I = 0"));
                }
            }
            if !self.a.product_span(ib, ib).is_zero() && ib.cols() > 0 {
                return Err(ZeroPhiIdeal("I^2 = 0"));
            }
        }
        Ok(())
    }

    /// The ring `Λ_(φ,ψ)` (cached).
    pub fn ring(&self) -> Result<&MoritaRing> {
        self.ring.get_or_init(|| build_ring(self)).as_ref().map_err(|e| e.clone())
    }

    /// Context with the corners exchanged: `(B, A, N, M, ψ, φ)`. Its ring is
    /// isomorphic to `Λ_(φ,ψ)` by swapping the two diagonal blocks and the
    /// two off-diagonal blocks.
    pub fn swapped(&self) -> MoritaContext {
        MoritaContext::new_unchecked(
            self.b.clone(),
            self.a.clone(),
            self.n.clone(),
            self.m.clone(),
            self.psi.mat.clone(),
            self.phi.mat.clone(),
        )
    }

    /// Context over the opposite algebras whose left modules are the right
    /// modules of this context: `(A^op, B^op, N, M, φ', ψ')` with
    /// `φ'(n ⊗ m) = φ(m ⊗ n)` and `ψ'(m ⊗ n) = ψ(n ⊗ m)`.
    pub fn opposite(&self) -> Arc<MoritaContext> {
        self.op
            .get_or_init(|| {
                let (ao, bo) = (self.a.opposite_arc(), self.b.opposite_arc());
                let m2 = Bimodule::new_unchecked(
                    bo.clone(),
                    ao.clone(),
                    self.n.dim(),
                    self.n.right_actions().to_vec(),
                    self.n.left_actions().to_vec(),
                );
                let n2 = Bimodule::new_unchecked(
                    ao.clone(),
                    bo.clone(),
                    self.m.dim(),
                    self.m.right_actions().to_vec(),
                    self.m.left_actions().to_vec(),
                );
                let (dm, dn) = (self.m.dim(), self.n.dim());
                let phi2 = transpose_pairs(&self.phi.mat, dm, dn);
                let psi2 = transpose_pairs(&self.psi.mat, dn, dm);
                Arc::new(MoritaContext::new_unchecked(ao, bo, m2, n2, phi2, psi2))
            })
            .clone()
    }
}

/// Reindex columns from pairs `(i, j)` (`i < p`, `j < q`) to `(j, i)`.
pub(crate) fn transpose_pairs(m: &Mat, p: usize, q: usize) -> Mat {
    let perm: Vec<usize> = (0..q).flat_map(|j| (0..p).map(move |i| i * q + j)).collect();
    m.select_cols(&perm)
}

/// `Λ_(φ,ψ)` with basis order `A`, `N`, `M`, `B`.
#[derive(Clone, Debug)]
pub struct MoritaRing {
    pub ring: Arc<Algebra>,
    /// Block sizes `(dim A, dim N, dim M, dim B)`.
    pub dims: [usize; 4],
    pub e1: Mat,
    pub e2: Mat,
}

impl MoritaRing {
    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Offset of block `k` (0 = A, 1 = N, 2 = M, 3 = B).
    pub fn offset(&self, k: usize) -> usize {
        self.dims[..k].iter().sum()
    }

    /// Embedding of block `k` into the ring (`dim Λ x dims[k]`).
    pub fn embed(&self, k: usize) -> Mat {
        let mut e = Mat::zero(self.ring.field(), self.dim(), self.dims[k]);
        e.put(self.offset(k), 0, &Mat::identity(self.ring.field(), self.dims[k]));
        e
    }

    pub fn project(&self, k: usize) -> Mat {
        self.embed(k).transpose()
    }
}

pub fn build_ring(ctx: &MoritaContext) -> Result<MoritaRing> {
    ctx.validate()?;
    let f = ctx.field();
    let (da, dn, dm, db) = (ctx.a.dim(), ctx.n.dim(), ctx.m.dim(), ctx.b.dim());
    let (on, om, ob) = (da, da + dn, da + dn + dm);
    let d = ob + db;
    let cols = |k: usize, g: &dyn Fn(usize) -> Mat| -> Mat {
        let cs: Vec<Mat> = (0..k).map(g).collect();
        Mat::from_cols(f, cs.first().map(|c| c.rows()).unwrap_or(0), &cs)
    };
    let mut left = Vec::with_capacity(d);
    for p in 0..da {
        let mut l = Mat::zero(f, d, d);
        l.put(0, 0, ctx.a.left(p));
        l.put(on, on, ctx.n.left_action(p));
        left.push(l);
    }
    for s in 0..dn {
        let mut l = Mat::zero(f, d, d);
        if dm > 0 {
            l.put(0, om, &cols(dm, &|q| ctx.psi.eval(s, q)));
        }
        if db > 0 {
            l.put(on, ob, &cols(db, &|q| ctx.n.right_action(q).col(s)));
        }
        left.push(l);
    }
    for s in 0..dm {
        let mut l = Mat::zero(f, d, d);
        if da > 0 {
            l.put(om, 0, &cols(da, &|q| ctx.m.right_action(q).col(s)));
        }
        if dn > 0 {
            l.put(ob, on, &cols(dn, &|q| ctx.phi.eval(s, q)));
        }
        left.push(l);
    }
    for p in 0..db {
        let mut l = Mat::zero(f, d, d);
        l.put(om, om, ctx.m.left_action(p));
        l.put(ob, ob, ctx.b.left(p));
        left.push(l);
    }
    let mut e1 = Mat::zero(f, d, 1);
    e1.put(0, 0, ctx.a.unit());
    let mut e2 = Mat::zero(f, d, 1);
    e2.put(ob, 0, ctx.b.unit());
    let ring = Algebra::from_left_unchecked(f, left, e1.add(&e2));
    validate_algebra(&ring).map_err(|v| Error::Verification(format!("Morita ring fails the algebra axioms: {v}")))?;
    Ok(MoritaRing { ring: Arc::new(ring), dims: [da, dn, dm, db], e1, e2 })
}
