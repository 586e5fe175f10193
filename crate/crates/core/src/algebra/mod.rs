//! Finite-dimensional algebras and their modules.

#[allow(clippy::module_inception)]
mod algebra;
mod homological;
mod idempotent;
mod iso;
mod module;
mod radical;

pub use algebra::{opposite_algebra, validate_algebra, Algebra, Violation};
pub use homological::{
    ext_group, global_dimension, indecomposable_projective, injective_dimension, is_injective_module, is_projective,
    is_self_injective, projective_cover, projective_dimension, projective_resolution, simple_modules, tor_group,
    ProjectiveCover, Resolution,
};
pub use idempotent::Idempotents;
pub use iso::{decompose, endomorphism_algebra, is_algebra_hom, is_isomorphic};
pub use module::{cokernel_of, hom_space, image_of, kernel_of, FDModule, HomSpace, ModuleHom};
pub(crate) use module::same_alg;
pub use radical::{is_nilpotent_ideal, jacobson_radical, semisimple_quotient};
