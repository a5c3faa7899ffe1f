//! Jets of smooth functions on finite point clouds: truncated Taylor
//! arithmetic, Whitney seminorms, the multivariate chain rule (pullback of
//! jets along polynomial maps), and invariance of jets under orthogonal
//! group actions.
//!
//! Everything is generic over [`Scalar`]; exact rational arithmetic is the
//! reference, `f64`/`f32` are available where rounding is acceptable. The
//! aliases below fix the two common instantiations.

pub mod actions;
pub mod combinatorics;
pub mod error;
pub mod invariants;
pub mod jetcalc;
pub mod matrix;
pub mod multiindex;
pub mod pullback;
pub mod random;
pub mod scalar;
pub mod symbolic;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use scalar::{Rational, Scalar, DEFAULT_TOLERANCE};

pub type RationalPolynomial = symbolic::Polynomial<Rational>;
pub type RationalPolyMap = symbolic::PolyMap<Rational>;
pub type RationalMatrix = matrix::Matrix<Rational>;
pub type RationalCloud = jetcalc::PointCloud<Rational>;
pub type RationalJetField = jetcalc::JetField<Rational>;
pub type RationalGroup = actions::FiniteGroup<Rational>;

pub type FloatPolynomial = symbolic::Polynomial<f64>;
pub type FloatPolyMap = symbolic::PolyMap<f64>;
pub type FloatMatrix = matrix::Matrix<f64>;
pub type FloatCloud = jetcalc::PointCloud<f64>;
pub type FloatJetField = jetcalc::JetField<f64>;
pub type FloatGroup = actions::FiniteGroup<f64>;
