pub mod decomposition;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod manifold;
pub mod operators;
pub mod quad;
pub mod random;
pub mod runner;
pub mod spectral;
pub mod validation;

pub use error::{Error, Result};
