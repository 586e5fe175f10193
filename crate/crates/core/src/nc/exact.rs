use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::morita::MoritaContext;

/// `0 -> R -> S ⊕ T -> W -> 0` for `W = Λ_(φ,ψ)`, `R` the diagonal,
/// `S` upper and `T` lower triangular, `w = 1`.
#[derive(Clone, Debug)]
pub struct ExactContext {
    /// Bases of `R`, `S`, `T` as columns in `W`.
    pub r: Mat,
    pub s: Mat,
    pub t: Mat,
    /// `r -> (λ r, -μ r)`.
    pub first: Mat,
    /// `(s, t) -> s w + w t`.
    pub second: Mat,
    pub checks: Vec<(String, bool)>,
}

impl ExactContext {
    pub fn dims(&self) -> [usize; 4] {
        [self.r.cols(), self.s.cols(), self.t.cols(), self.r.rows()]
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|(_, b)| *b)
    }

    /// `dim R - dim S - dim T + dim W`.
    pub fn euler(&self) -> i64 {
        let [r, s, t, w] = self.dims().map(|d| d as i64);
        r - s - t + w
    }
}

fn coordinate_span(d: usize, f: crate::linalg::Field, ranges: &[(usize, usize)]) -> Mat {
    let cols: Vec<Mat> = ranges.iter().flat_map(|&(a, b)| (a..b).map(move |i| Mat::unit(f, d, i))).collect();
    Mat::from_cols(f, d, &cols)
}

fn is_subalgebra(w: &Algebra, basis: &Mat) -> bool {
    let span = Mat::hstack(&[basis, w.unit(), &w.product_span(basis, basis)]);
    span.rank() == basis.rank()
}

pub fn build_exact_context(ctx: &MoritaContext) -> Result<ExactContext> {
    let ring = ctx.ring()?;
    let w = &ring.ring;
    let f = ctx.field();
    let d = ring.dim();
    let blk = |k: usize| (ring.offset(k), ring.offset(k) + ring.dims[k]);
    let (a, n, m, b) = (blk(0), blk(1), blk(2), blk(3));
    let r = coordinate_span(d, f, &[a, b]);
    let s = coordinate_span(d, f, &[a, n, b]);
    let t = coordinate_span(d, f, &[a, m, b]);
    // R sits inside S and T; solve for the inclusions in their coordinates.
    let inside = |big: &Mat, name: &str| -> Result<Mat> {
        big.solve(&r)?.ok_or_else(|| Error::Verification(format!("R is not contained in {name}")))
    };
    let (lam, mu) = (inside(&s, "S")?, inside(&t, "T")?);
    let first = Mat::vstack(&[&lam, &mu.neg()]);
    let one = w.unit();
    let second = Mat::hstack(&[&w.right_mult(one).matmul(&s), &w.left_mult(one).matmul(&t)]);
    let (ds, dt) = (s.cols(), t.cols());
    let checks = vec![
        ("R is a subalgebra".to_string(), is_subalgebra(w, &r)),
        ("S is a subalgebra".to_string(), is_subalgebra(w, &s)),
        ("T is a subalgebra".to_string(), is_subalgebra(w, &t)),
        ("R -> S ⊕ T is injective".to_string(), first.rank() == r.cols()),
        ("composite is zero".to_string(), second.matmul(&first).is_zero()),
        ("exact at S ⊕ T".to_string(), first.rank() + second.rank() == ds + dt),
        ("S ⊕ T -> W is onto".to_string(), second.rank() == d),
    ];
    Ok(ExactContext { r, s, t, first, second, checks })
}
