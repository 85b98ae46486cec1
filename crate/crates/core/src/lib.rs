//! Exact computational algebra for modules with mutually centralising rings
//! of operators: commutants, division-ring certification, decomposition of a
//! module into lines and verifiable linearisation certificates.

pub mod commutant;
pub mod corollaries;
pub mod field;
pub mod fixtures;
pub mod harness;
pub mod linalg;
pub mod matrix;
pub mod module;
pub mod poly;

pub use commutant::{algebra_closure, centralizer_basis, is_division_ring, AlgebraBasis, DivisionVerdict};
pub use field::{Field, FieldError, FieldSpec, Scalar};
pub use linalg::{LinalgError, Subspace};
pub use matrix::Matrix;
pub use module::{Irreducibility, IrreducibilityOptions, Method, ModuleError, ModuleInstance, Strategy};
pub mod engine;
