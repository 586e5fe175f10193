//! Small named algebras used by tests, benches and the CLI fixtures.

use std::sync::Arc;

use crate::algebra::{Algebra, FDModule};
use crate::bimodule::Bimodule;
use crate::linalg::{Field, Mat};
use crate::morita::{trivial_extension, MoritaContext, TrivialExtension};

/// Algebra from a sparse multiplication table of `(i, j, k, c)` entries
/// meaning `b_i b_j` has coefficient `c` at `b_k`.
pub fn from_table(field: Field, dim: usize, unit: &[i64], table: &[(usize, usize, usize, i64)]) -> Algebra {
    let mut left = vec![Mat::zero(field, dim, dim); dim];
    for &(i, j, k, c) in table {
        let cur = left[i].get(k, j);
        left[i].set(k, j, &(&cur + &field.from_i64(c)));
    }
    let a = Algebra::from_left_unchecked(field, left, Mat::from_i64(field, dim, 1, unit));
    debug_assert!(a.validate().is_ok());
    a
}

pub fn ground(field: Field) -> Arc<Algebra> {
    Arc::new(Algebra::ground(field))
}

/// `k x k` with basis the two idempotents.
pub fn k_times_k(field: Field) -> Arc<Algebra> {
    Arc::new(from_table(field, 2, &[1, 1], &[(0, 0, 0, 1), (1, 1, 1, 1)]))
}

/// `k[x]/(x^n)` with basis `1, x, ..., x^{n-1}`.
pub fn truncated_poly(field: Field, n: usize) -> Arc<Algebra> {
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i + j < n {
                t.push((i, j, i + j, 1));
            }
        }
    }
    let mut unit = vec![0; n];
    unit[0] = 1;
    Arc::new(from_table(field, n, &unit, &t))
}

/// `k[x]/(x^2)` with basis `1, x`.
pub fn dual_numbers(field: Field) -> Arc<Algebra> {
    truncated_poly(field, 2)
}

/// Path algebra of `1 <- 2` with basis `e1, e2, a` where `a = e1 a e2`.
/// Here `A e1 = span{e1}` is simple projective and `A e2 = span{e2, a}`.
pub fn path_a2(field: Field) -> Arc<Algebra> {
    Arc::new(from_table(field, 3, &[1, 1, 0], &[(0, 0, 0, 1), (1, 1, 1, 1), (0, 2, 2, 1), (2, 1, 2, 1)]))
}

/// Full matrix algebra `M_n(k)` with matrix units `E_{ij}` at index `i*n + j`.
pub fn matrix_algebra(field: Field, n: usize) -> Arc<Algebra> {
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                t.push((i * n + j, j * n + l, i * n + l, 1));
            }
        }
    }
    let unit: Vec<i64> = (0..n * n).map(|x| if x / n == x % n { 1 } else { 0 }).collect();
    Arc::new(from_table(field, n * n, &unit, &t))
}

/// Upper triangular `n x n` matrices, basis `E_{ij}` for `i <= j` in
/// row-major order.
pub fn upper_triangular(field: Field, n: usize) -> Arc<Algebra> {
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let pos = |i: usize, j: usize| idx.iter().position(|&p| p == (i, j)).unwrap();
    let mut t = Vec::new();
    for &(i, j) in &idx {
        for &(j2, l) in &idx {
            if j == j2 {
                t.push((pos(i, j), pos(j2, l), pos(i, l), 1));
            }
        }
    }
    let unit: Vec<i64> = idx.iter().map(|&(i, j)| if i == j { 1 } else { 0 }).collect();
    Arc::new(from_table(field, idx.len(), &unit, &t))
}

/// Group algebra of a finite abelian group `Z/n1 x ... x Z/nr`.
pub fn abelian_group_algebra(field: Field, orders: &[usize]) -> Arc<Algebra> {
    let size: usize = orders.iter().product();
    let digits = |mut x: usize| -> Vec<usize> {
        orders
            .iter()
            .map(|&o| {
                let d = x % o;
                x /= o;
                d
            })
            .collect()
    };
    let index = |ds: &[usize]| -> usize {
        let mut x = 0;
        for (t, &o) in orders.iter().enumerate().rev() {
            x = x * o + ds[t];
        }
        x
    };
    let mut t = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let (a, b) = (digits(i), digits(j));
            let s: Vec<usize> = a.iter().zip(&b).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
            t.push((i, j, index(&s), 1));
        }
    }
    let mut unit = vec![0; size];
    unit[0] = 1;
    Arc::new(from_table(field, size, &unit, &t))
}

/// Simple module `k` over `k[x]/(x^n)` (x acting by zero).
pub fn trivial_module(alg: &Arc<Algebra>) -> FDModule {
    let f = alg.field();
    let action = (0..alg.dim()).map(|i| Mat::from_i64(f, 1, 1, &[if i == 0 { 1 } else { 0 }])).collect();
    FDModule::new_unchecked(alg.clone(), 1, action)
}

/// Module given by explicit action matrices on the basis; validated.
pub fn module(alg: &Arc<Algebra>, action: Vec<Mat>) -> FDModule {
    FDModule::new(alg.clone(), action).expect("fixture module is valid")
}

/// One-dimensional `A`-`B`-bimodule with the given scalar actions of the
/// basis elements.
pub fn scalar_bimodule(a: &Arc<Algebra>, b: &Arc<Algebra>, left: &[i64], right: &[i64]) -> Bimodule {
    let f = a.field();
    let s = |c: &i64| Mat::from_i64(f, 1, 1, &[*c]);
    Bimodule::new(a.clone(), b.clone(), left.iter().map(s).collect(), right.iter().map(s).collect())
        .expect("fixture bimodule is valid")
}

/// `(k, k, M = 0, N = k, 0, 0)`, whose ring is the path algebra of `A_2`.
pub fn triangular_context(f: Field) -> Arc<MoritaContext> {
    let k = ground(f);
    MoritaContext::zero_maps(k.clone(), k.clone(), Bimodule::zero(&k, &k), scalar_bimodule(&k, &k, &[1], &[1]))
        .expect("valid")
}

/// `Λ_(0,0)` with `A = B = k` and `M = N = k`.
pub fn two_cycle(f: Field) -> Arc<MoritaContext> {
    let k = ground(f);
    let one = scalar_bimodule(&k, &k, &[1], &[1]);
    MoritaContext::zero_maps(k.clone(), k, one.clone(), one).expect("valid")
}

/// The 5-dimensional `Λ_ψ`: `A = k ⋉ k = k[x]/(x^2)`, `B = k`, `M = N = k`
/// with `x` acting by zero, and `ψ(n ⊗ m) = x`.
pub fn psi_example(f: Field) -> (TrivialExtension, Arc<MoritaContext>) {
    let k = ground(f);
    let ext = trivial_extension(&k, &scalar_bimodule(&k, &k, &[1], &[1])).expect("valid");
    let one = scalar_bimodule(&k, &k, &[1], &[1]);
    let ctx = ext.psi_context(&k, &one, &one, &Mat::from_i64(f, 1, 1, &[1])).expect("valid");
    (ext, ctx)
}
