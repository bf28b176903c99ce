pub mod bath;
pub mod decay;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod oracle;
pub mod paths;
pub mod quadrature;
pub mod register;
pub mod spectral;
pub mod units;

pub use error::{Error, QuadratureError, Result};
