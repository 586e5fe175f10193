//! Jacobson radical by trace forms.
//!
//! Characteristic 0: the radical is the kernel of `(x, y) -> Tr(L_{xy})`.
//! Characteristic p: the iterated trace method. With `I_{-1} = A`,
//! `I_i = { x in I_{i-1} : g_i(x y) = 0 for all y }` where
//! `g_i(z) = Tr(Z^(p^i)) / p^i mod p` for an integer lift `Z` of the
//! left-regular matrix of `z`; the radical is `I_l` with `l = floor(log_p n)`.

use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};

use super::Algebra;

fn lift_entries(m: &Mat) -> Vec<u128> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).residue().expect("prime field") as u128)
        .collect()
}

fn matmul_mod(a: &[u128], b: &[u128], n: usize, modulus: u128) -> Vec<u128> {
    let mut out = vec![0u128; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * b[k * n + j]) % modulus;
            }
        }
    }
    out
}

/// `g_i(z)` for the element with left-regular matrix `l`.
fn g(l: &Mat, p: u128, i: u32) -> Result<u64> {
    let n = l.rows();
    let modulus = p.pow(i + 1);
    let mut base = lift_entries(l);
    // raise to p^i by i successive p-th powers
    for _ in 0..i {
        let mut acc = {
            let mut id = vec![0u128; n * n];
            for d in 0..n {
                id[d * n + d] = 1;
            }
            id
        };
        let mut b = base.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = matmul_mod(&acc, &b, n, modulus);
            }
            b = matmul_mod(&b, &b, n, modulus);
            e >>= 1;
        }
        base = acc;
    }
    let tr = (0..n).fold(0u128, |t, d| (t + base[d * n + d]) % modulus);
    let pi = p.pow(i);
    if tr % pi != 0 {
        return Err(Error::Verification(format!("trace form g_{i} not integral")));
    }
    Ok(((tr / pi) % p) as u64)
}

pub(crate) fn compute_radical(a: &Algebra) -> Result<Mat> {
    let f = a.field();
    let n = a.dim();
    if n == 0 {
        return Ok(Mat::zero(f, 0, 0));
    }
    let rad = match f {
        Field::Q => {
            let mut form = Mat::zero(f, n, n);
            for j in 0..n {
                for t in 0..n {
                    let z = a.left(t).col(j);
                    form.set(j, t, &a.left_mult(&z).trace());
                }
            }
            form.kernel_basis()
        }
        Field::Fp(p) => {
            let p = p as u128;
            let mut l = 0u32;
            while p.pow(l + 1) <= n as u128 {
                l += 1;
            }
            let mut v = Mat::identity(f, n);
            for i in 0..=l {
                if v.cols() == 0 {
                    break;
                }
                let mut gm = Mat::zero(f, n, v.cols());
                for t in 0..v.cols() {
                    let lt = a.left_mult(&v.col(t));
                    for j in 0..n {
                        let z = lt.col(j);
                        let val = g(&a.left_mult(&z), p, i)?;
                        gm.set(j, t, &f.element(val));
                    }
                }
                let k = gm.kernel_basis();
                v = if k.cols() == 0 { Mat::zero(f, n, 0) } else { v.matmul(&k).image_basis() };
            }
            v
        }
    };
    if !is_nilpotent_ideal(a, &rad) {
        return Err(Error::Verification("computed radical is not nilpotent".into()));
    }
    Ok(rad)
}

/// Whether the span of `ideal` is nilpotent under multiplication.
pub fn is_nilpotent_ideal(a: &Algebra, ideal: &Mat) -> bool {
    let mut pow = ideal.clone();
    for _ in 0..=a.dim() {
        if pow.cols() == 0 {
            return true;
        }
        pow = a.product_span(&pow, ideal);
    }
    pow.cols() == 0
}

pub fn jacobson_radical(a: &Algebra) -> Result<Mat> {
    a.radical().cloned()
}

/// `A / rad A` with the projection.
pub fn semisimple_quotient(a: &Algebra) -> Result<(Algebra, Mat)> {
    let r = a.radical()?;
    Ok(a.quotient(r))
}
