//! Cochain-complex windows, complete resolutions and Gorenstein projective certificates.
mod certify;
mod horseshoe;
mod verify;
mod window;

pub use certify::{
    certify_gorenstein_projective, complete_resolution, left_approximation, split_window, AnchoredWindow,
    GPCertificate, Periodicity, SearchBounds, Verdict, Witness, DEFAULT_BUDGET, DEFAULT_PERIOD_BOUND, DEFAULT_WINDOW,
};
pub use horseshoe::{horseshoe, Horseshoe};
pub use verify::{verify_certificate, CertificateCheck};
pub use window::{homology_dim, is_exact, total_exactness, ComplexWindow};
