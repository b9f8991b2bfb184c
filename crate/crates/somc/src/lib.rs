pub mod cli;
pub mod codes;
pub mod cyclotomic;
pub mod error;
pub mod galois;
pub mod pfunc;
pub mod search;
pub mod theory;
pub mod walsh;

pub use error::{Error, Result};
