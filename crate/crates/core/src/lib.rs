//! Numerical geometry of the space of oriented lines in Euclidean 3-space,
//! viewed as the holomorphic tangent bundle of the Riemann sphere.
//!
//! The crate locates Lagrangian curves on holomorphic (spectral) curves,
//! builds the flat ruled surfaces and edges of regression they generate,
//! counts the lines of a curve through a point, and ships the charge-2 and
//! tetrahedral charge-3 monopole curves as builtins.

pub mod bivariate;
pub mod cli;
pub mod correspondence;
pub mod error;
pub mod incidence;
pub mod kahler;
pub mod lagrangian;
pub mod monopoles;
pub mod poly;
pub mod ruled;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
