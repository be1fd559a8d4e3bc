//! Exact computations with mixed volumes of boxes, hyperbolic matrices, and
//! certificates that the mixed volume matrix of boxes need not be hyperbolic
//! once the reference bodies are repeated at least twice.

pub mod cubefam;
pub mod diffop;
pub mod error;
pub mod exactlin;
pub mod fedotov;
pub mod hypmat;
pub mod mixvol;
pub mod suites;

pub use error::{Error, Result};
