//! Hyperbolicity analysis of Grad's 13-moment equations and of a modified
//! 13-moment closure built on an anisotropic Gaussian weight.
//!
//! All algebra is generic over [`Scalar`]; use [`f64`] for scans and
//! [`Rational`] when an identity has to hold exactly.

pub mod analysis;
pub mod error;
pub mod grad13;
pub mod matrix;
pub mod mod13;
pub mod poly;
pub mod region;
pub mod roots;
pub mod rotation;
pub mod scalar;
pub mod state;

pub use analysis::{DiagOptions, DiagReport};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use mod13::EtaPair;
pub use poly::Polynomial;
pub use roots::RootSet;
pub use scalar::Scalar;
pub use state::{GradState, GradState1D, ModState};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type MatrixF = Matrix<f64>;
pub type MatrixQ = Matrix<Rational>;
pub type PolyF = Polynomial<f64>;
pub type PolyQ = Polynomial<Rational>;
