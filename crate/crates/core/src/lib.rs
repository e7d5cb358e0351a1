//! Covering rational points of bounded height on analytic curves by few
//! algebraic hypersurfaces, using interpolation determinants, together with
//! Weierstrass division and decomposition certificates that keep the method
//! uniform over analytic families.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod explorer;
pub mod interpolation;
pub mod interval;
pub mod rational;
pub mod suites;
pub mod weierstrass;

pub use error::{Error, Result};
