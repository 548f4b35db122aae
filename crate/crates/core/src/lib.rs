//! Conjugacy invariants of isometries of symmetric and symplectic forms over
//! odd-characteristic fields, and their factorizations into products of
//! unipotent elements of index 2.

pub mod error;
pub mod exactfield;
pub mod factor;
pub mod forms;
pub mod io;
pub mod isopair;
pub mod linal;
pub mod poly;
pub mod sample;
pub mod tower;

pub use error::{Error, Result};
pub use exactfield::{FieldCtx, FieldElem};
pub use linal::{Matrix, Subspace, Vector};
pub use poly::Poly;
