//! Dense exact linear algebra: matrices, subspaces, quotients and the
//! F[t]-module structure given by a single endomorphism.

mod matrix;
mod quotient;
mod smith;
mod subspace;

pub use crate::exactfield::FieldElem;
pub use matrix::{dot, is_zero_vec, unit_vector, vec_add, vec_scale, vec_sub, Matrix, Vector};
pub use quotient::QuotientCtx;
pub use smith::{
    companion, fitting_split, frobenius, frobenius_basis, invariant_factors, jordan_from_factors,
    jordan_numbers, linear_poly, poly_apply, poly_image_chain, poly_kernel_chain,
    rational_canonical_form, similarity_transform, FittingSplit, Frobenius, JordanData,
};
pub use subspace::Subspace;
