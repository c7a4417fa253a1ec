pub mod chartab;
pub mod cli;
pub mod classfn;
pub mod counting;
pub mod error;
pub mod exact;
pub mod field;
pub mod matspace;
pub mod nirpoly;
pub mod stablering;
pub mod symcheck;

pub use error::{Error, Result};
