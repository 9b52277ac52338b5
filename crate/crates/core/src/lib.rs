pub mod abgroup;
pub mod cdga;
pub mod chain;
pub mod diophantine;
pub mod encoder;
pub mod error;
pub mod haction;
pub mod intlinalg;
pub mod json;
pub mod simplicial;

pub use error::{Error, Result};
