pub mod bounds;
pub mod channels;
pub mod cli;
pub mod conic_ir;
pub mod error;
pub mod model;
pub mod qmatrix;

pub use error::{Error, Result};
