//! Gorenstein-projective modules over `Λ_ψ`: the criterion, construction of
//! totally exact resolutions from the corner data, compatibility checks and
//! the audit against direct certification.

mod assembly;
mod audit;
mod compat;
mod criterion;

pub use assembly::{build_total_resolution, resolve_and_build, ResolutionAssembly, TotalComplex};
pub use audit::{audit_equivalence, AuditClass, AuditReport, AuditRow, Hypotheses};
pub use compat::{
    check_compat, check_semi_weak_quadruple, compatible_by_flatness, compose_compatible, CompatReason, CompatVerdict,
    CompatWitness, SemiWeakSide,
};
pub use criterion::{check_conditions, zero_case_check, Clause, CriterionReport, IsoTest, Overall};
