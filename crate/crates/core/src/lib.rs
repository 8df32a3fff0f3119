pub mod error;
pub mod poly;
pub mod rational;
pub mod ring;

pub use error::{Error, Result};
pub mod analyzer;
pub mod catalog;
pub mod ch_numeric;
pub mod chern;
pub mod cli;
pub mod localization;
