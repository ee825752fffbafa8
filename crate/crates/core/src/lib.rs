//! Spatial Stirling operators on a finite ground set.

pub mod combinat;
pub mod error;
pub mod factorial;
pub mod ground;
pub mod ktransform;
pub mod multiset;
pub mod poisson;
pub mod polyop;
pub mod random;
pub mod report;
pub mod scalar;
pub mod series;
pub mod stirling;
pub mod suite;
pub mod symtensor;
pub mod touchard;
pub mod wick;

pub use error::{Error, Result};

/// Exact rationals.
pub type Q = num_rational::BigRational;
/// Exact Gaussian rationals.
pub type Qi = num_complex::Complex<Q>;
