//! Exact contexts from Morita contexts, the noncommutative tensor product
//! `C(A, Γ, M, N, φ, ψ)`, its identification with `Λ_(φ,0)` when
//! `φ = ψ = 0`, and the mirrored Gorenstein-projective criterion over it.

mod exact;
mod mirror;
mod ring;

pub use exact::{build_exact_context, ExactContext};
pub use mirror::{check_nc_criterion, iso_with_morita, mirror_quadruple, NcMoritaIso, NcReport};
pub use ring::{build_nc_tensor, NcTensorRing};
