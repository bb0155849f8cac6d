//! Jordan triple systems realized as spaces of complex matrices, their grids,
//! and the ternary rings of operators they generate.

pub mod envelope;
pub mod error;
pub mod closure;
pub mod grids;
pub mod matrix;
pub mod radical;
pub mod triple;
pub mod random;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::ToleranceConfig;
