//! Exact-arithmetic engine for the operator side of Hitchin-type integrable
//! systems: truncated Laurent series over the rationals, matrix
//! pseudo-differential operators with their adjoint and residue pairing, a
//! finite-window model of the Sato Grassmannian with orthogonal-complement
//! duality, multicomponent KP flows solved through a generalized Birkhoff
//! factorization (including the Sp twisted self-adjoint reduction), and the
//! characteristic-coefficient / resultant algebra of spectral curves.
//!
//! Everything is computed over `BigRational`; there is no floating point
//! anywhere, so every identity asserted by the test suites holds exactly
//! within the recorded truncation windows.

pub mod error;
pub mod grassmann;
pub mod kp;
pub mod linalg;
pub mod pdo;
pub mod series;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use grassmann::{FredholmData, GammaElement, GrassmannPoint};
pub use kp::{DressingOperator, FlowLabel, FlowTimes, LaxOperator, TDeformation};
pub use pdo::{involution_matrix, MatrixPdo};
pub use series::{LaurentSeries, Rational, VectorLaurent, XPoly};
pub use spectral::{HiggsMatrix, HitchinPoint, LaurentPoly, Numerology};
