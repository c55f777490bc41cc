pub mod densities;
pub mod ec;
pub mod equidist;
pub mod error;
pub mod experiments;
pub mod hiprec;
pub mod poly;
pub mod sequence;
pub mod svg;
pub mod cli;

pub use error::{Error, Result};
