//! Morita context rings `Λ_(φ,ψ)`, their modules as quadruples `(X, Y, f, g)`,
//! the recollement functors, and trivial extensions.

mod classify;
mod context;
mod functors;
mod identities;
mod quadruple;
mod trivial;

pub use classify::{classify_injectives, classify_projectives, Classified, Corner};
pub use context::{build_ring, ContextViolation, MoritaContext, MoritaRing};
pub use functors::{
    apply_functor, delta_a, delta_b, h_a, h_a_hom, h_b, h_b_hom, natural_maps, p_a, p_a_hom, p_b, p_b_hom, phi_map,
    psi_map, q_a, q_a_hom, q_b, q_b_hom, t_a, t_a_hom, t_b, t_b_hom, u_a, u_b, xi_map, z_a, z_a_hom, z_b, z_b_hom,
    zeta_map, Functor, FunctorValue, NaturalMaps,
};
pub use identities::{tensor_over_morita, verify_hom_identity, HomIdentity, HomInputs, HomIsoReport, RightQuadruple};
pub use quadruple::{QuadrupleHom, QuadrupleModule};
pub(crate) use quadruple::through;
pub use trivial::{
    annihilation_identities, ideal_bimodule, pushout_check, recognize_trivial_extension, structural_maps, t_lambda,
    zero_ideal_extension,
    t_lambda_hom, t_lambda_iso, trivial_extension, ExtendedModule, StructuralMaps, TrivialExtension,
};
