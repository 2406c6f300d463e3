pub mod ballots;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod methods;
pub mod oracle;
pub mod rational;
pub mod stages;

pub use error::{Error, Result};
