pub mod analytic;
pub mod cli;
pub mod eig;
pub mod error;
pub mod experiments;
pub mod model;

pub use error::{Error, Result};
