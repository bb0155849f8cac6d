//! Dense complex matrices, direct sums of rectangular matrix spaces and
//! linear spans of their elements.

pub mod block;
pub mod dense;
pub mod json;
pub mod span;

pub use block::{ternary, BlockElement, BlockShape};
pub use dense::{kron, ComplexMatrix, C64, I, ONE, ZERO};
pub use json::{BlockElementJson, MatrixJson};
pub use span::{span_basis, span_in, subspace_equal, Subspace};
