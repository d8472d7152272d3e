//! Quasi feedback forms for linear differential-algebraic control systems
//! `E x' = A x + B u`, computed in exact rational arithmetic.

mod blocks;
pub mod error;
pub mod linalg;
pub mod pdfeedback;
pub mod pencil;
pub mod pfeedback;
pub mod sylvester;
pub mod system;
pub mod templates;
pub mod wong;

pub use error::{Error, Result};
pub use system::SystemTriple;
