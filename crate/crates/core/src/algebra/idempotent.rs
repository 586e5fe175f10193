//! Complete sets of primitive orthogonal idempotents by Fitting splitting
//! inside corner algebras `eAe`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{min_poly, Field, Mat};

use super::Algebra;

#[derive(Clone, Debug)]
pub struct Idempotents {
    /// Primitive orthogonal idempotents summing to 1, as column vectors.
    pub elems: Vec<Mat>,
    /// Isomorphism class of `A e_i` for each idempotent.
    pub class: Vec<usize>,
    /// Index into `elems` of a representative for each class.
    pub reps: Vec<usize>,
    /// Basis (columns, in `A`) of `A e` for each class representative.
    pub proj_basis: Vec<Mat>,
}

impl Idempotents {
    pub fn n_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, c: usize) -> &Mat {
        &self.elems[self.reps[c]]
    }
}

fn corner(a: &Algebra, e: &Mat, rhs: &Mat) -> Mat {
    let le = a.left_mult(e);
    let re = a.right_mult(rhs);
    le.matmul(&re).image_basis()
}

fn in_span(span: &Mat, v: &Mat) -> bool {
    if span.cols() == 0 {
        return v.is_zero();
    }
    span.solve(v).expect("same field").is_some()
}

fn candidates<'a>(a: &'a Algebra, c: &'a Mat, seed: u64) -> impl Iterator<Item = Mat> + 'a {
    let f = a.field();
    let d = c.cols();
    let mut fixed: Vec<Mat> = (0..d).map(|s| c.col(s)).collect();
    for s in 0..d {
        for t in s + 1..d {
            fixed.push(c.col(s).add(&c.col(t)));
            fixed.push(a.mul(&c.col(s), &c.col(t)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..400).map(move |_| {
        let coeffs: Vec<i64> = (0..d)
            .map(|_| match f {
                Field::Fp(p) => rng.gen_range(0..p as i64),
                Field::Q => rng.gen_range(-4..=4),
            })
            .collect();
        c.matmul(&Mat::from_i64(f, d, 1, &coeffs))
    });
    fixed.into_iter().chain(random)
}

/// Split `e` into two nonzero orthogonal idempotents, or `None` if `e` is
/// primitive.
fn split(a: &Algebra, rad: &Mat, e: &Mat) -> Result<Option<(Mat, Mat)>> {
    let f = a.field();
    let c = corner(a, e, e);
    let erad = if rad.cols() == 0 {
        Mat::zero(f, a.dim(), 0)
    } else {
        let le = a.left_mult(e);
        let re = a.right_mult(e);
        le.matmul(&re).matmul(rad).image_basis()
    };
    let top = c.cols() - erad.cols();
    if top <= 1 {
        return Ok(None);
    }
    let cl = c.left_inverse().expect("independent");
    let ec = cl.matmul(e);
    let n = c.cols();
    for z in candidates(a, &c, 0x1de3 ^ (n as u64)) {
        let lz = cl.matmul(&a.left_mult(&z)).matmul(&c);
        for lam in min_poly(&lz).roots() {
            let lw = lz.sub(&Mat::identity(f, n).scale(&lam));
            let pw = lw.pow(n as u32);
            let im = pw.image_basis();
            let ker = pw.kernel_basis();
            if im.cols() == 0 || ker.cols() == 0 {
                continue;
            }
            let Some(coef) = Mat::hstack(&[&im, &ker]).solve(&ec)? else { continue };
            let u = im.matmul(&coef.block(0, im.cols(), 0, 1));
            let v = ker.matmul(&coef.block(im.cols(), n, 0, 1));
            let (e1, e2) = (c.matmul(&u), c.matmul(&v));
            let ok = a.mul(&e1, &e1) == e1
                && a.mul(&e2, &e2) == e2
                && a.mul(&e1, &e2).is_zero()
                && a.mul(&e2, &e1).is_zero()
                && !e1.is_zero()
                && !e2.is_zero();
            if ok {
                return Ok(Some((e1, e2)));
            }
        }
    }
    Err(Error::NonSplit(format!(
        "corner of dimension {n} with semisimple part of dimension {top} has no splitting element"
    )))
}

pub(crate) fn compute(a: &Algebra) -> Result<Idempotents> {
    let rad = a.radical()?.clone();
    let mut elems = Vec::new();
    if a.dim() > 0 {
        let mut stack = vec![a.unit().clone()];
        while let Some(e) = stack.pop() {
            match split(a, &rad, &e)? {
                None => elems.push(e),
                Some((e1, e2)) => {
                    stack.push(e2);
                    stack.push(e1);
                }
            }
        }
    }
    let mut class = vec![usize::MAX; elems.len()];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..elems.len() {
        for (ci, &r) in reps.iter().enumerate() {
            if equivalent(a, &rad, &elems[r], &elems[i]) {
                class[i] = ci;
                break;
            }
        }
        if class[i] == usize::MAX {
            class[i] = reps.len();
            reps.push(i);
        }
    }
    let proj_basis = reps.iter().map(|&r| a.right_mult(&elems[r]).image_basis()).collect();
    Ok(Idempotents { elems, class, reps, proj_basis })
}

/// `A e ≅ A e'` iff `e A e' · e' A e` is not inside the radical.
fn equivalent(a: &Algebra, rad: &Mat, e: &Mat, e2: &Mat) -> bool {
    let x = corner(a, e, e2);
    let y = corner(a, e2, e);
    for s in 0..x.cols() {
        for t in 0..y.cols() {
            let p = a.mul(&x.col(s), &y.col(t));
            if !in_span(rad, &p) {
                return true;
            }
        }
    }
    false
}
