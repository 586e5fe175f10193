use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{invalid, Result};
use crate::linalg::{Field, Mat, Scalar};

/// Finite-dimensional associative unital algebra given by structure
/// constants `b_i b_j = sum_k c[i][j][k] b_k`.
///
/// The constants are held as the left-regular matrices `L_i` (column `j` of
/// `L_i` is `b_i b_j`) together with the right-regular matrices `R_j`.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    dim: usize,
    unit: Mat,
    left: Vec<Mat>,
    right: Vec<Mat>,
    gens: OnceLock<Vec<usize>>,
    rad: OnceLock<Result<Mat>>,
    idem: OnceLock<Result<super::Idempotents>>,
    op: OnceLock<Arc<Algebra>>,
}

impl PartialEq for Algebra {
    fn eq(&self, o: &Algebra) -> bool {
        std::ptr::eq(self, o) || (self.field == o.field && self.unit == o.unit && self.left == o.left)
    }
}
impl Eq for Algebra {}

/// First failing identity found by [`validate_algebra`]; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
    Shape(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { i, j, k } => write!(f, "(b{i} b{j}) b{k} != b{i} (b{j} b{k})"),
            Violation::LeftUnit { i } => write!(f, "1 b{i} != b{i}"),
            Violation::RightUnit { i } => write!(f, "b{i} 1 != b{i}"),
            Violation::Shape(s) => write!(f, "{s}"),
        }
    }
}

impl Algebra {
    /// Build from flattened constants `consts[(i*n + j)*n + k] = c[i][j][k]`.
    /// The result is validated.
    pub fn new(field: Field, dim: usize, consts: &[Scalar], unit: &[Scalar]) -> Result<Algebra> {
        let a = Algebra::new_unchecked(field, dim, consts, unit)?;
        if let Err(v) = a.validate() {
            return invalid(format!("not an associative unital algebra: {v}"));
        }
        Ok(a)
    }

    /// Shape-checked only; use [`Algebra::validate`] to test the axioms.
    pub fn new_unchecked(field: Field, dim: usize, consts: &[Scalar], unit: &[Scalar]) -> Result<Algebra> {
        if consts.len() != dim * dim * dim || unit.len() != dim {
            return invalid(format!(
                "structure constants: expected {} entries and unit of length {dim}",
                dim * dim * dim
            ));
        }
        if consts.iter().chain(unit).any(|s| s.field() != field) {
            return invalid("structure constants over a different field");
        }
        let mut left = vec![Mat::zero(field, dim, dim); dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let c = &consts[(i * dim + j) * dim + k];
                    if !c.is_zero() {
                        left[i].set(k, j, c);
                    }
                }
            }
        }
        Ok(Algebra::from_left_unchecked(field, left, Mat::column(field, unit)))
    }

    pub fn from_left(field: Field, left: Vec<Mat>, unit: Mat) -> Result<Algebra> {
        let a = Algebra::from_left_unchecked(field, left, unit);
        if let Err(v) = a.validate() {
            return invalid(format!("not an associative unital algebra: {v}"));
        }
        Ok(a)
    }

    pub fn from_left_unchecked(field: Field, left: Vec<Mat>, unit: Mat) -> Algebra {
        let dim = left.len();
        let mut right = vec![Mat::zero(field, dim, dim); dim];
        for (i, l) in left.iter().enumerate() {
            for j in 0..dim {
                for k in 0..dim {
                    if !l.entry_is_zero(k, j) {
                        right[j].set(k, i, &l.get(k, j));
                    }
                }
            }
        }
        Algebra {
            field,
            dim,
            unit,
            left,
            right,
            gens: OnceLock::new(),
            rad: OnceLock::new(),
            idem: OnceLock::new(),
            op: OnceLock::new(),
        }
    }

    /// The base field itself as a one-dimensional algebra.
    pub fn ground(field: Field) -> Algebra {
        Algebra::from_left_unchecked(field, vec![Mat::identity(field, 1)], Mat::identity(field, 1))
    }

    pub fn zero_algebra(field: Field) -> Algebra {
        Algebra::from_left_unchecked(field, vec![], Mat::zero(field, 0, 1))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &Mat {
        &self.unit
    }

    pub fn basis(&self, i: usize) -> Mat {
        Mat::unit(self.field, self.dim, i)
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.left[i].get(k, j)
    }

    /// Flattened constants in the order accepted by [`Algebra::new`].
    pub fn constants(&self) -> Vec<Scalar> {
        let n = self.dim;
        let mut v = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    v.push(self.constant(i, j, k));
                }
            }
        }
        v
    }

    /// `L_i : x -> b_i x`
    pub fn left(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    pub fn lefts(&self) -> &[Mat] {
        &self.left
    }

    /// `R_j : x -> x b_j`
    pub fn right(&self, j: usize) -> &Mat {
        &self.right[j]
    }

    pub fn rights(&self) -> &[Mat] {
        &self.right
    }

    /// Left multiplication by an arbitrary element (a column vector).
    pub fn left_mult(&self, x: &Mat) -> Mat {
        combine(self.field, self.dim, x, &self.left)
    }

    pub fn right_mult(&self, y: &Mat) -> Mat {
        combine(self.field, self.dim, y, &self.right)
    }

    pub fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        self.left_mult(x).matmul(y)
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.dim;
        if self.unit.rows() != n || self.unit.cols() != 1 || self.left.iter().any(|l| l.rows() != n || l.cols() != n) {
            return Err(Violation::Shape("structure matrices have the wrong size".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let bij = self.left[i].col(j);
                let lhs = self.left_mult(&bij);
                let rhs = self.left[i].matmul(&self.left[j]);
                if lhs != rhs {
                    let k = (0..n).find(|&k| lhs.col(k) != rhs.col(k)).unwrap();
                    return Err(Violation::Associativity { i, j, k });
                }
            }
        }
        let lu = self.left_mult(&self.unit);
        let ru = self.right_mult(&self.unit);
        for i in 0..n {
            if lu.col(i) != self.basis(i) {
                return Err(Violation::LeftUnit { i });
            }
        }
        for i in 0..n {
            if ru.col(i) != self.basis(i) {
                return Err(Violation::RightUnit { i });
            }
        }
        Ok(())
    }

    /// Basis of the Jacobson radical (cached).
    pub fn radical(&self) -> Result<&Mat> {
        self.rad.get_or_init(|| super::radical::compute_radical(self)).as_ref().map_err(|e| e.clone())
    }

    /// A complete set of primitive orthogonal idempotents (cached).
    pub fn idempotents(&self) -> Result<&super::Idempotents> {
        self.idem.get_or_init(|| super::idempotent::compute(self)).as_ref().map_err(|e| e.clone())
    }

    pub fn opposite(&self) -> Algebra {
        Algebra::from_left_unchecked(self.field, self.right.clone(), self.unit.clone())
    }

    /// Shared handle to the opposite algebra (cached).
    pub fn opposite_arc(&self) -> Arc<Algebra> {
        self.op.get_or_init(|| Arc::new(self.opposite())).clone()
    }

    pub fn is_commutative(&self) -> bool {
        self.left == self.right
    }

    /// Span of all products `u v` with `u` in the column span of `us` and
    /// `v` in that of `vs`, as an image basis.
    pub fn product_span(&self, us: &Mat, vs: &Mat) -> Mat {
        let cols: Vec<Mat> = (0..us.cols()).map(|s| self.left_mult(&us.col(s)).matmul(vs)).collect();
        Mat::from_cols(self.field, self.dim, &cols).image_basis()
    }

    /// Smallest subalgebra containing the unit and the given elements.
    pub fn subalgebra_closure(&self, elems: &Mat) -> Mat {
        let mut span = Mat::hstack(&[&self.unit, elems]).image_basis();
        loop {
            let next = Mat::hstack(&[&span, &self.product_span(&span, &span)]).image_basis();
            if next.cols() == span.cols() {
                return span;
            }
            span = next;
        }
    }

    /// A minimal set of basis indices generating the algebra, chosen
    /// greedily in basis order. Modules and homs only need checking
    /// against these.
    pub fn generators(&self) -> &[usize] {
        self.gens.get_or_init(|| {
            let mut chosen: Vec<usize> = Vec::new();
            let mut span = self.subalgebra_closure(&Mat::zero(self.field, self.dim, 0));
            for i in 0..self.dim {
                if span.cols() == self.dim {
                    break;
                }
                let bi = self.basis(i);
                if span.solve(&bi).expect("same field").is_some() {
                    continue;
                }
                chosen.push(i);
                let sel: Vec<Mat> = chosen.iter().map(|&c| self.basis(c)).collect();
                span = self.subalgebra_closure(&Mat::from_cols(self.field, self.dim, &sel));
            }
            // drop generators made redundant by later ones
            let mut k = 0;
            while k < chosen.len() {
                let rest: Vec<Mat> =
                    chosen.iter().enumerate().filter(|(t, _)| *t != k).map(|(_, &c)| self.basis(c)).collect();
                if self.subalgebra_closure(&Mat::from_cols(self.field, self.dim, &rest)).cols() == self.dim {
                    chosen.remove(k);
                } else {
                    k += 1;
                }
            }
            chosen
        })
    }

    /// Whether the column span of `basis` is a two-sided ideal.
    pub fn is_ideal(&self, basis: &Mat) -> bool {
        if basis.cols() == 0 {
            return true;
        }
        (0..self.dim).all(|i| {
            let l = self.left[i].matmul(basis);
            let r = self.right[i].matmul(basis);
            basis.solve(&l).unwrap().is_some() && basis.solve(&r).unwrap().is_some()
        })
    }

    /// `A / I` for an ideal spanned by the columns of `ideal`, with the
    /// projection matrix `A -> A/I`.
    pub fn quotient(&self, ideal: &Mat) -> (Algebra, Mat) {
        let q = crate::linalg::Quotient::new(self.field, self.dim, ideal);
        let left: Vec<Mat> = (0..q.dim())
            .map(|t| {
                let b = q.lift.col(t);
                q.proj.matmul(&self.left_mult(&b)).matmul(&q.lift)
            })
            .collect();
        let unit = q.proj.matmul(&self.unit);
        (Algebra::from_left_unchecked(self.field, left, unit), q.proj)
    }

    /// Same algebra in the basis `b'_i = sum_k p[k][i] b_k`; `p` invertible.
    pub fn change_basis(&self, p: &Mat) -> Result<Algebra> {
        let Some(pinv) = p.inverse() else { return invalid("change of basis is singular") };
        let left: Vec<Mat> = (0..self.dim)
            .map(|i| pinv.matmul(&self.left_mult(&p.col(i))).matmul(p))
            .collect();
        Ok(Algebra::from_left_unchecked(self.field, left, pinv.matmul(&self.unit)))
    }

    /// `A x B` with basis of `A` followed by that of `B`.
    pub fn direct_product(&self, o: &Algebra) -> Algebra {
        let (n, m) = (self.dim, o.dim);
        let mut left = Vec::with_capacity(n + m);
        for l in &self.left {
            left.push(l.direct_sum(&Mat::zero(self.field, m, m)));
        }
        for l in &o.left {
            left.push(Mat::zero(self.field, n, n).direct_sum(l));
        }
        Algebra::from_left_unchecked(self.field, left, Mat::vstack(&[&self.unit, &o.unit]))
    }

    /// `A (x)_k B` with lexicographic basis `b_i (x) c_j` at index `i*m + j`.
    pub fn tensor(&self, o: &Algebra) -> Algebra {
        let mut left = Vec::with_capacity(self.dim * o.dim);
        for i in 0..self.dim {
            for j in 0..o.dim {
                left.push(self.left[i].tensor_k(&o.left[j]));
            }
        }
        Algebra::from_left_unchecked(self.field, left, self.unit.tensor_k(&o.unit))
    }

    pub fn into_arc(self) -> Arc<Algebra> {
        Arc::new(self)
    }
}

fn combine(field: Field, n: usize, x: &Mat, ms: &[Mat]) -> Mat {
    let mut acc = Mat::zero(field, n, n);
    for (i, m) in ms.iter().enumerate() {
        if !x.entry_is_zero(i, 0) {
            acc = acc.add(&m.scale(&x.get(i, 0)));
        }
    }
    acc
}

pub fn validate_algebra(a: &Algebra) -> std::result::Result<(), Violation> {
    a.validate()
}

pub fn opposite_algebra(a: &Algebra) -> Algebra {
    a.opposite()
}
