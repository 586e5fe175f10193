//! Exact linear algebra over `F_p` and `Q`.

mod elim;
mod mat;
mod poly;
mod scalar;

pub use elim::{kernel_basis, rank, solve, Quotient, Rref};
pub use mat::Mat;
pub use poly::{min_poly, Poly};
pub use scalar::{Field, Scalar};


#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("bad field: {0}")]
    BadField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("shape mismatch: {0}")]
    Shape(String),
}
