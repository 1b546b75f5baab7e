//! Exact and certified arithmetic for the Pell x-coordinates that are
//! k-generalized Fibonacci numbers.

pub mod cli;
pub mod error;
pub mod kfib;
pub mod linforms;
pub mod numerics;
pub mod pell;
pub mod pipeline;
pub mod reduction;

pub use error::{Error, Result};
