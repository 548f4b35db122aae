mod bilinear;
mod hermitian;

pub use bilinear::*;
pub use hermitian::*;
