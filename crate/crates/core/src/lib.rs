//! Weighted generalized inverses of rectangular matrices.

pub mod classic;
pub mod decomp;
pub mod error;
pub mod exact;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod w123k;
pub mod weighted;

pub use error::{Result, WinvError};
pub use exact::ExactMatrix;
pub use matrix::{Matrix, Tolerance, C64};
