//! Operator invariants of ribbon graphs over a modular category,
//! Reshetikhin-Turaev surgery invariants, and the extended functor into
//! Kapranov-Voevodsky 2-vector spaces.

pub mod diagram;
pub mod error;
pub mod fusion;
pub mod mtc;
pub mod report;
pub mod scalar;
pub mod surgery;
pub mod tqft2;

pub use error::{Error, Result};
pub use mtc::{bundled_category, load_category, parse_category, ModularCategoryData};
pub use scalar::Scalar;
