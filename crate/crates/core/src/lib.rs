pub mod algebra;
pub mod bimodule;
pub mod complex;
pub mod error;
pub mod gp;
pub mod io;
pub mod linalg;
pub mod morita;
pub mod nc;
pub mod par;

pub use error::{Error, Result};
pub mod fixtures;
pub mod gen;
