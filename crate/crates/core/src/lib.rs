//! Correlation-tensor entanglement detection for two distinguishable
//! components of `N` two-mode bosons.
//!
//! Each component with a fixed boson number is mapped onto a logical qudit
//! of dimension `d = N + 1` through `|k) = |N-k, k>`. States are then
//! characterised by their correlation tensor in the generalized Gell-Mann
//! basis, and entanglement is certified when the tensor norm exceeds its
//! largest singular value.
//!
//! Module map:
//! - [`basis`]: Gell-Mann matrices, index conventions, Schwinger operators.
//! - [`states`]: coefficient-matrix constructors for the state families.
//! - [`witness`]: correlation tensors and the derived identifiers.
//! - [`oracle`]: brute-force cross-checks and verification suites.
//! - [`sweep`]: parameter sweeps and their CSV/JSON serialization.

pub mod basis;
pub mod combinatorics;
mod error;
pub mod linalg;
pub mod oracle;
pub mod states;
pub mod sweep;
pub mod witness;

pub use error::{Error, Result};

pub use num_complex::Complex64;

pub type CMatrix = nalgebra::DMatrix<Complex64>;
pub type CVector = nalgebra::DVector<Complex64>;
pub type RMatrix = nalgebra::DMatrix<f64>;
pub type RVector = nalgebra::DVector<f64>;
