//! Entanglement detection from multiple fidelity measurements.
//!
//! Decides when a set of reference product states is effective (admits a
//! fidelity-based witness that detects some entangled state), and computes the
//! joint numerical range and joint separable numerical range of two
//! references, analytically where closed forms exist and by support-function
//! sweeps otherwise.

pub mod effectiveness;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod quantum;
pub mod range;
pub mod subspace;
pub mod tol;

pub use error::{Error, Result};
pub use quantum::{Dims, HermitianOperator, ProductState, PureState};
