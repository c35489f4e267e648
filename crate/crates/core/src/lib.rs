//! Orthogonal polynomial bases for the de Rham complex on the unit disk and on
//! periodic and finite cylinders, with quadrature and finite-difference oracles.

pub mod derham;
pub mod diskbases;
pub mod error;
pub mod geometry;
pub mod modm;
pub mod suites;
pub mod univariate;
pub mod verify;
pub mod zernike;

pub use error::{Error, Result};
