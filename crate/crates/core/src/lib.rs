pub mod arith;
pub mod cli;
pub mod distset;
pub mod error;
pub mod fourier;
pub mod gauss;
pub mod grid;
pub mod numeric;
pub mod sphere;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
