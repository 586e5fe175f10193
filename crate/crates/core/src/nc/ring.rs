use std::sync::Arc;

use crate::algebra::{validate_algebra, Algebra};
use crate::bimodule::{tensor_bimodules, Bimodule, Tensor};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::morita::MoritaContext;

/// `C(A, Γ, M, N, φ, ψ)` on `A ⊕ N ⊕ M ⊕ Γ ⊕ (M ⊗_A N)`.
#[derive(Clone, Debug)]
pub struct NcTensorRing {
    pub ring: Arc<Algebra>,
    /// Block sizes `(A, N, M, Γ, M ⊗ N)`.
    pub dims: [usize; 5],
    /// `J = M ⊗_A N` as a `Γ`-bimodule.
    pub j: Bimodule,
    pub j_tensor: Tensor,
    pub ctx: Arc<MoritaContext>,
}

impl NcTensorRing {
    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offset(&self, k: usize) -> usize {
        self.dims[..k].iter().sum()
    }

    /// The `∘` product of two elements given as coordinate columns.
    pub fn product(&self, x: &Mat, y: &Mat) -> Mat {
        product(&self.ctx, &self.j, &self.j_tensor, self.dims, x, y)
    }
}

struct Parts {
    a: Mat,
    n: Mat,
    m: Mat,
    b: Mat,
    j: Mat,
}

fn split(v: &Mat, dims: [usize; 5]) -> Parts {
    let mut at = 0;
    let mut take = |d: usize| {
        let p = v.block(at, at + d, 0, 1);
        at += d;
        p
    };
    Parts { a: take(dims[0]), n: take(dims[1]), m: take(dims[2]), b: take(dims[3]), j: take(dims[4]) }
}

/// `(m ⊗ n)(m' ⊗ n') = m ⊗ ψ(n ⊗ m') n'`, on lifts to `M ⊗_k N`.
fn j_product(ctx: &MoritaContext, t: &Tensor, j1: &Mat, j2: &Mat) -> Mat {
    let f = ctx.field();
    let (dm, dn) = (ctx.m.dim(), ctx.n.dim());
    let (u, v) = (t.lift().matmul(j1), t.lift().matmul(j2));
    // w[q] = Σ_r ψ(n_q ⊗ m_r) · v_r, with v_r the N-part of v at m_r
    let w: Vec<Mat> = (0..dn)
        .map(|q| {
            (0..dm).fold(Mat::zero(f, dn, 1), |acc, r| {
                let vr = v.block(r * dn, (r + 1) * dn, 0, 1);
                acc.add(&ctx.n.left_by(&ctx.psi.eval(q, r)).matmul(&vr))
            })
        })
        .collect();
    let mut out = Mat::zero(f, dm * dn, 1);
    for p in 0..dm {
        for q in 0..dn {
            if !u.entry_is_zero(p * dn + q, 0) {
                let term = Mat::unit(f, dm, p).tensor_k(&w[q]).scale(&u.get(p * dn + q, 0));
                out = out.add(&term);
            }
        }
    }
    t.proj().matmul(&out)
}

fn product(ctx: &MoritaContext, jb: &Bimodule, t: &Tensor, dims: [usize; 5], x: &Mat, y: &Mat) -> Mat {
    let (p, q) = (split(x, dims), split(y, dims));
    let phi = |j: &Mat| ctx.phi.mat.matmul(t.lift()).matmul(j);
    let a = ctx.a.mul(&p.a, &q.a).add(&ctx.psi.mat.matmul(&p.n.tensor_k(&q.m)));
    let n = ctx.n.left_by(&p.a).matmul(&q.n).add(&ctx.n.right_by(&q.b).matmul(&p.n)).add(&ctx.n.right_by(&phi(&q.j)).matmul(&p.n));
    let m = ctx.m.right_by(&q.a).matmul(&p.m).add(&ctx.m.left_by(&p.b).matmul(&q.m)).add(&ctx.m.left_by(&phi(&p.j)).matmul(&q.m));
    let b = ctx.b.mul(&p.b, &q.b);
    let j = t
        .proj()
        .matmul(&p.m.tensor_k(&q.n))
        .add(&jb.left_by(&p.b).matmul(&q.j))
        .add(&jb.right_by(&q.b).matmul(&p.j))
        .add(&j_product(ctx, t, &p.j, &q.j));
    Mat::vstack(&[&a, &n, &m, &b, &j])
}

/// Structure constants read off the `∘` product, then validated; a failure
/// names the basis triple that breaks associativity.
pub fn build_nc_tensor(ctx: &Arc<MoritaContext>) -> Result<NcTensorRing> {
    ctx.validate()?;
    let f = ctx.field();
    let (j, jt) = tensor_bimodules(&ctx.m, &ctx.n)?;
    let dims = [ctx.a.dim(), ctx.n.dim(), ctx.m.dim(), ctx.b.dim(), j.dim()];
    let d: usize = dims.iter().sum();
    let left: Vec<Mat> = (0..d)
        .map(|i| {
            let ei = Mat::unit(f, d, i);
            let cols: Vec<Mat> = (0..d).map(|k| product(ctx, &j, &jt, dims, &ei, &Mat::unit(f, d, k))).collect();
            Mat::from_cols(f, d, &cols)
        })
        .collect();
    let mut unit = Mat::zero(f, d, 1);
    unit.put(0, 0, ctx.a.unit());
    unit.put(dims[0] + dims[1] + dims[2], 0, ctx.b.unit());
    let ring = Algebra::from_left_unchecked(f, left, unit);
    validate_algebra(&ring).map_err(|v| Error::Verification(format!("noncommutative tensor product: {v}")))?;
    Ok(NcTensorRing { ring: Arc::new(ring), dims, j, j_tensor: jt, ctx: ctx.clone() })
}
