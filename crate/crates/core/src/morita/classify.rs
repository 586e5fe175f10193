use std::sync::Arc;

use crate::algebra::{indecomposable_projective, Algebra};
use crate::error::Result;

use super::functors::{h_a, h_b, t_a, t_b};
use super::{MoritaContext, QuadrupleModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corner {
    A,
    B,
}

/// An indecomposable projective or injective quadruple with the number of
/// times it occurs in the regular module (resp. its dual).
#[derive(Clone, Debug)]
pub struct Classified {
    pub corner: Corner,
    pub class: usize,
    pub multiplicity: usize,
    pub quadruple: QuadrupleModule,
}

fn multiplicities(alg: &Arc<Algebra>) -> Result<Vec<usize>> {
    let idem = alg.idempotents()?;
    let mut m = vec![0; idem.n_classes()];
    for &c in &idem.class {
        m[c] += 1;
    }
    Ok(m)
}

/// `T_A(P)` and `T_B(Q)` over the indecomposable projectives of `A` and `B`.
pub fn classify_projectives(ctx: &Arc<MoritaContext>) -> Result<Vec<Classified>> {
    let mut out = Vec::new();
    for (corner, alg) in [(Corner::A, &ctx.a), (Corner::B, &ctx.b)] {
        for (c, &mult) in multiplicities(alg)?.iter().enumerate() {
            let p = indecomposable_projective(alg, c)?;
            let quadruple = match corner {
                Corner::A => t_a(ctx, &p)?,
                Corner::B => t_b(ctx, &p)?,
            };
            out.push(Classified { corner, class: c, multiplicity: mult, quadruple });
        }
    }
    Ok(out)
}

/// `H_A(U)` and `H_B(V)` over the indecomposable injectives, obtained as
/// duals of the indecomposable projectives of the opposite algebras.
pub fn classify_injectives(ctx: &Arc<MoritaContext>) -> Result<Vec<Classified>> {
    let mut out = Vec::new();
    for (corner, alg) in [(Corner::A, &ctx.a), (Corner::B, &ctx.b)] {
        let op = alg.opposite_arc();
        for (c, &mult) in multiplicities(&op)?.iter().enumerate() {
            let u = indecomposable_projective(&op, c)?.dual(alg);
            let quadruple = match corner {
                Corner::A => h_a(ctx, &u)?,
                Corner::B => h_b(ctx, &u)?,
            };
            out.push(Classified { corner, class: c, multiplicity: mult, quadruple });
        }
    }
    Ok(out)
}
