//! Module isomorphism. Random combinations first, then exhaustive search
//! over small prime fields, then an exact Krull-Schmidt comparison. A
//! non-split endomorphism algebra yields `Undetermined`, never a false
//! negative.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Field, Mat, Scalar};

use super::{hom_space, Algebra, FDModule, HomSpace, ModuleHom};

const RANDOM_TRIALS: usize = 20;
const ENUMERATION_LIMIT: u64 = 1 << 14;

fn random_coeffs(rng: &mut ChaCha8Rng, f: Field, n: usize) -> Vec<Scalar> {
    (0..n)
        .map(|_| match f {
            Field::Fp(p) => f.element(rng.gen_range(0..p as u64)),
            Field::Q => f.from_i64(rng.gen_range(-6..=6)),
        })
        .collect()
}

pub fn is_isomorphic(x: &FDModule, y: &FDModule) -> Result<Option<ModuleHom>> {
    x.check_same(y, "isomorphism test across algebras")?;
    if x.dim() != y.dim() {
        return Ok(None);
    }
    if x.dim() == 0 {
        return Ok(Some(ModuleHom::zero(x, y)));
    }
    if x == y {
        return Ok(Some(ModuleHom::identity(x)));
    }
    let h = hom_space(x, y)?;
    if h.dim() == 0 {
        return Ok(None);
    }
    let dims = [h.dim(), hom_space(y, x)?.dim(), hom_space(x, x)?.dim(), hom_space(y, y)?.dim()];
    if dims.iter().any(|&d| d != dims[0]) {
        return Ok(None);
    }
    if let Some(m) = search(&h) {
        return Ok(Some(m));
    }
    let f = x.field();
    if let Some(q) = f.order() {
        if (q as f64).powi(h.dim() as i32) <= ENUMERATION_LIMIT as f64 {
            return Ok(enumerate(&h, q));
        }
    }
    krull_schmidt(x, y)
}

fn search(h: &HomSpace) -> Option<ModuleHom> {
    let f = h.source.field();
    for b in 0..h.dim() {
        if h.basis[b].is_invertible() {
            return Some(h.hom(b));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..RANDOM_TRIALS {
        let m = h.combination(&random_coeffs(&mut rng, f, h.dim()));
        if m.is_iso() {
            return Some(m);
        }
    }
    None
}

fn enumerate(h: &HomSpace, q: u64) -> Option<ModuleHom> {
    let f = h.source.field();
    let total = q.pow(h.dim() as u32);
    for code in 1..total {
        let mut c = code;
        let coeffs: Vec<Scalar> = (0..h.dim())
            .map(|_| {
                let d = c % q;
                c /= q;
                f.element(d)
            })
            .collect();
        let m = h.combination(&coeffs);
        if m.is_iso() {
            return Some(m);
        }
    }
    None
}

/// `End(X)` as an algebra in the hom-space basis.
pub fn endomorphism_algebra(x: &FDModule) -> Result<(Algebra, HomSpace)> {
    let h = hom_space(x, x)?;
    let f = x.field();
    let bm = h.basis_matrix();
    let l = bm.left_inverse().expect("hom basis is independent");
    let left: Vec<Mat> = h
        .basis
        .iter()
        .map(|hi| {
            let cols: Vec<Mat> = h.basis.iter().map(|hj| l.matmul(&hi.matmul(hj).vectorize())).collect();
            Mat::from_cols(f, h.dim(), &cols)
        })
        .collect();
    let unit = l.matmul(&Mat::identity(f, x.dim()).vectorize());
    Ok((Algebra::from_left_unchecked(f, left, unit), h))
}

/// Decompose into indecomposable summands: for each, the inclusion and the
/// projection (`proj_i ∘ inc_i = id`, `sum inc_i ∘ proj_i = id`).
pub fn decompose(x: &FDModule) -> Result<Vec<(ModuleHom, ModuleHom)>> {
    if x.dim() == 0 {
        return Ok(vec![]);
    }
    let (end, h) = endomorphism_algebra(x)?;
    let idem = end.idempotents()?;
    let mut out = Vec::new();
    for e in &idem.elems {
        let coeffs: Vec<Scalar> = (0..e.rows()).map(|i| e.get(i, 0)).collect();
        let em = h.combination(&coeffs);
        let b = em.mat.image_basis();
        let (s, inc) = x.submodule(&b)?;
        let l = b.left_inverse().expect("independent");
        let proj = ModuleHom::new_unchecked(x.clone(), s, l.matmul(&em.mat));
        out.push((inc, proj));
    }
    Ok(out)
}

fn krull_schmidt(x: &FDModule, y: &FDModule) -> Result<Option<ModuleHom>> {
    let undetermined = |e: Error| match e {
        Error::NonSplit(m) => Error::Undetermined(format!("endomorphism algebra does not split: {m}")),
        other => other,
    };
    let dx = decompose(x).map_err(undetermined)?;
    let dy = decompose(y).map_err(undetermined)?;
    if dx.len() != dy.len() {
        return Ok(None);
    }
    let mut used = vec![false; dy.len()];
    let mut iso = Mat::zero(x.field(), y.dim(), x.dim());
    for (xi, px) in &dx {
        let mut found = false;
        for (j, (yj, _)) in dy.iter().enumerate() {
            if used[j] || yj.source.dim() != xi.source.dim() {
                continue;
            }
            // indecomposables are isomorphic iff some basis hom is invertible
            let hs = hom_space(&xi.source, &yj.source)?;
            if let Some(b) = hs.basis.iter().find(|m| m.is_invertible()) {
                iso = iso.add(&yj.mat.matmul(b).matmul(&px.mat));
                used[j] = true;
                found = true;
                break;
            }
        }
        if !found {
            return Ok(None);
        }
    }
    let m = ModuleHom::new_unchecked(x.clone(), y.clone(), iso);
    if !m.is_iso() || !m.intertwines() {
        return Err(Error::Verification("assembled isomorphism is not invertible".into()));
    }
    Ok(Some(m))
}

/// Algebra isomorphism test through the regular representations is not a
/// ring isomorphism test; this checks a given basis map instead.
pub fn is_algebra_hom(a: &Arc<Algebra>, b: &Arc<Algebra>, m: &Mat) -> bool {
    if m.rows() != b.dim() || m.cols() != a.dim() {
        return false;
    }
    if m.matmul(a.unit()) != *b.unit() {
        return false;
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lhs = m.matmul(&a.mul(&a.basis(i), &a.basis(j)));
            let rhs = b.mul(&m.col(i), &m.col(j));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}
