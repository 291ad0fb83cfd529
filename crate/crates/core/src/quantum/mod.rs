//! Complex linear algebra over small bipartite Hilbert spaces.
//!
//! Composite indices are row-major everywhere: `|i⟩⊗|j⟩` sits at
//! `i·d_b + j`.

pub mod eigen;
pub mod operator;
pub mod random;
pub mod state;

pub use eigen::{hermitian_eigensystem, EigenSystem};
pub use operator::{partial_transpose, DensityOperator, HermitianOperator, MatrixRepr, Subsystem};
pub use random::{random_local_unitary, random_product_state, random_pure_state, random_unitary};
pub use state::{fidelity, normalize, overlap, tensor, Dims, ProductState, PureState};
