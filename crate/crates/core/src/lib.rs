pub mod brute_oracle;
pub mod error;
pub mod ffpoly;
pub mod gl_classes;
pub mod partitions;
pub mod power_poly;
pub mod real_classes;
pub mod square_fibers;

pub use error::{Error, Result};
