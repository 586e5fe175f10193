//! Row reduction. Plain Gauss-Jordan over F_p, fraction-free Gauss-Jordan
//! (Bareiss) over Q. Pivots are the first nonzero entry in column order, so
//! every basis produced here is reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mat::Data;
use super::{Field, LinalgError, Mat};

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

fn rref_fp(p: u32, rows: usize, cols: usize, a: &[u32]) -> (Vec<u32>, Vec<usize>) {
    let p64 = p as u64;
    let mut m: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(r) = (pr..rows).find(|&r| m[r * cols + c] != 0) else { continue };
        if r != pr {
            for j in 0..cols {
                m.swap(r * cols + j, pr * cols + j);
            }
        }
        let inv = super::scalar::inv_mod(m[pr * cols + c], p64);
        for j in c..cols {
            m[pr * cols + j] = m[pr * cols + j] * inv % p64;
        }
        for i in 0..rows {
            if i == pr {
                continue;
            }
            let f = m[i * cols + c];
            if f == 0 {
                continue;
            }
            let nf = p64 - f;
            for j in c..cols {
                let v = m[pr * cols + j];
                if v != 0 {
                    m[i * cols + j] = (m[i * cols + j] + nf * v) % p64;
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    (m.into_iter().map(|x| x as u32).collect(), pivots)
}

fn rref_q_naive(rows: usize, cols: usize, a: &[BigRational]) -> (Vec<BigRational>, Vec<usize>) {
    let mut m = a.to_vec();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(r) = (pr..rows).find(|&r| !m[r * cols + c].is_zero()) else { continue };
        if r != pr {
            for j in 0..cols {
                m.swap(r * cols + j, pr * cols + j);
            }
        }
        let inv = m[pr * cols + c].recip();
        for j in c..cols {
            m[pr * cols + j] = &m[pr * cols + j] * &inv;
        }
        for i in 0..rows {
            if i == pr || m[i * cols + c].is_zero() {
                continue;
            }
            let f = m[i * cols + c].clone();
            for j in c..cols {
                if !m[pr * cols + j].is_zero() {
                    let d = &f * &m[pr * cols + j];
                    m[i * cols + j] -= d;
                }
            }
        }
        pivots.push(c);
        pr += 1;
    }
    (m, pivots)
}

/// Fraction-free Gauss-Jordan. Returns `None` if an exact division fails,
/// in which case the caller falls back to rational elimination.
fn rref_q_bareiss(rows: usize, cols: usize, a: &[BigRational]) -> Option<(Vec<BigRational>, Vec<usize>)> {
    let mut m: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = &a[i * cols..(i + 1) * cols];
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        for x in row {
            m.push(x.numer() * (&l / x.denom()));
        }
    }
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        let Some(r) = (pr..rows).find(|&r| !m[r * cols + c].is_zero()) else { continue };
        if r != pr {
            for j in 0..cols {
                m.swap(r * cols + j, pr * cols + j);
            }
        }
        let piv = m[pr * cols + c].clone();
        for i in 0..rows {
            if i == pr {
                continue;
            }
            let f = m[i * cols + c].clone();
            for j in 0..cols {
                let num = &piv * &m[i * cols + j] - &f * &m[pr * cols + j];
                let (q, rem) = num.div_rem(&prev);
                if !rem.is_zero() {
                    return None;
                }
                m[i * cols + j] = q;
            }
        }
        prev = piv;
        pivots.push(c);
        pr += 1;
    }
    let mut out = vec![BigRational::zero(); rows * cols];
    for (r, &c) in pivots.iter().enumerate() {
        let piv = m[r * cols + c].clone();
        for j in 0..cols {
            if !m[r * cols + j].is_zero() {
                out[r * cols + j] = BigRational::new(m[r * cols + j].clone(), piv.clone());
            }
        }
    }
    Some((out, pivots))
}

impl Mat {
    pub fn rref(&self) -> Rref {
        let (r, c) = (self.rows(), self.cols());
        match (&self.data, self.field()) {
            (Data::Fp(a), Field::Fp(p)) => {
                let (v, piv) = rref_fp(p, r, c, a);
                Rref { mat: Mat::from_fp(p, r, c, v), pivots: piv }
            }
            (Data::Q(a), _) => {
                let (v, piv) = rref_q_bareiss(r, c, a).unwrap_or_else(|| rref_q_naive(r, c, a));
                Rref { mat: Mat::from_q(r, c, v), pivots: piv }
            }
            _ => unreachable!(),
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows() == 0 || self.cols() == 0 {
            return 0;
        }
        self.rref().pivots.len()
    }

    /// Columns form a basis of the right null space, one per free column.
    pub fn kernel_basis(&self) -> Mat {
        let n = self.cols();
        let rr = self.rref();
        let free: Vec<usize> = (0..n).filter(|c| !rr.pivots.contains(c)).collect();
        let mut k = Mat::zero(self.field(), n, free.len());
        let one = self.field().one();
        for (t, &f) in free.iter().enumerate() {
            k.set(f, t, &one);
            for (r, &pc) in rr.pivots.iter().enumerate() {
                if !rr.mat.entry_is_zero(r, f) {
                    k.set(pc, t, &-&rr.mat.get(r, f));
                }
            }
        }
        k
    }

    /// Basis of the column space: the pivot columns of `self`.
    pub fn image_basis(&self) -> Mat {
        if self.cols() == 0 || self.rows() == 0 {
            return Mat::zero(self.field(), self.rows(), 0);
        }
        let rr = self.rref();
        self.select_cols(&rr.pivots)
    }

    /// Some `x` with `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &Mat) -> Result<Option<Mat>, LinalgError> {
        Ok(self.preimage(b)?.map(|(x, _)| x))
    }

    /// Particular solution and kernel basis of `self * x = b`.
    pub fn preimage(&self, b: &Mat) -> Result<Option<(Mat, Mat)>, LinalgError> {
        if self.field() != b.field() {
            return Err(LinalgError::FieldMismatch(self.field(), b.field()));
        }
        if self.rows() != b.rows() {
            return Err(LinalgError::Shape(format!(
                "solve: {} rows against {} rows",
                self.rows(),
                b.rows()
            )));
        }
        let n = self.cols();
        let aug = Mat::hstack(&[self, b]);
        let rr = aug.rref();
        if rr.pivots.iter().any(|&p| p >= n) {
            return Ok(None);
        }
        let mut x = Mat::zero(self.field(), n, b.cols());
        for (r, &pc) in rr.pivots.iter().enumerate() {
            for j in 0..b.cols() {
                if !rr.mat.entry_is_zero(r, n + j) {
                    x.set(pc, j, &rr.mat.get(r, n + j));
                }
            }
        }
        Ok(Some((x, self.kernel_basis())))
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows();
        let rr = Mat::hstack(&[self, &Mat::identity(self.field(), n)]).rref();
        if rr.pivots.len() < n || rr.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(rr.mat.block(0, n, n, 2 * n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows()
    }

    /// `L` with `L * self = I` for a matrix of full column rank; coordinates
    /// of vectors in its column span are `L * v`.
    pub fn left_inverse(&self) -> Option<Mat> {
        let (n, k) = (self.rows(), self.cols());
        if k == 0 {
            return Some(Mat::zero(self.field(), 0, n));
        }
        let rows = self.transpose().rref().pivots;
        if rows.len() < k {
            return None;
        }
        let inv = self.select_rows(&rows).inverse()?;
        let mut sel = Mat::zero(self.field(), k, n);
        let one = self.field().one();
        for (t, &r) in rows.iter().enumerate() {
            sel.set(t, r, &one);
        }
        Some(inv.matmul(&sel))
    }

    /// Basis of the intersection of the column spaces of `self` and `o`.
    pub fn intersect(&self, o: &Mat) -> Mat {
        let k = Mat::hstack(&[self, &o.neg()]).kernel_basis();
        let top = k.block(0, self.cols(), 0, k.cols());
        self.matmul(&top).image_basis()
    }
}

/// Quotient of `k^n` by the span of the columns of `span`, presented on the
/// coordinates complementary to the pivots of the row-reduced relations.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// `q x n` projection onto the quotient.
    pub proj: Mat,
    /// `n x q` section sending quotient basis vector `t` to `e_{complement[t]}`.
    pub lift: Mat,
    pub complement: Vec<usize>,
}

impl Quotient {
    pub fn new(field: Field, n: usize, span: &Mat) -> Quotient {
        assert_eq!(span.rows(), n, "relation vectors have wrong length");
        let rr = if span.cols() == 0 {
            Rref { mat: Mat::zero(field, 0, n), pivots: vec![] }
        } else {
            span.transpose().rref()
        };
        let complement: Vec<usize> = (0..n).filter(|c| !rr.pivots.contains(c)).collect();
        let q = complement.len();
        let mut proj = Mat::zero(field, q, n);
        let mut lift = Mat::zero(field, n, q);
        let one = field.one();
        for (t, &c) in complement.iter().enumerate() {
            proj.set(t, c, &one);
            lift.set(c, t, &one);
        }
        for (r, &pc) in rr.pivots.iter().enumerate() {
            for (t, &c) in complement.iter().enumerate() {
                if !rr.mat.entry_is_zero(r, c) {
                    proj.set(t, pc, &-&rr.mat.get(r, c));
                }
            }
        }
        Quotient { proj, lift, complement }
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }
}

pub fn rank(m: &Mat) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &Mat) -> Mat {
    m.kernel_basis()
}

pub fn solve(a: &Mat, b: &Mat) -> Result<Option<Mat>, LinalgError> {
    a.solve(b)
}
