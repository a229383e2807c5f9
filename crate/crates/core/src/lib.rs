//! Bounds and certificates for minimum-energy configurations of repulsive
//! particles on toric grids.

pub mod certify;
pub mod conic;
pub mod error;
pub mod jordan;
pub mod linalg;
pub mod reduced;
pub mod search;
pub mod spectra;
pub mod torus;

pub use error::{Error, Result};
pub use num_rational::BigRational;
