//! Reference sets used by the demos and tests.

use crate::quantum::ProductState;

/// `(|00⟩, |++⟩)`: local fidelities 1/2, joint fidelity 1/4.
pub fn example1_pair() -> Vec<ProductState> {
    vec![
        ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]),
        ProductState::from_real(&[1.0, 1.0], &[1.0, 1.0]),
    ]
}

/// `(|00⟩, |11⟩)`.
pub fn orthogonal_pair() -> Vec<ProductState> {
    vec![
        ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]),
        ProductState::from_real(&[0.0, 1.0], &[0.0, 1.0]),
    ]
}

/// `(|00⟩, |0+⟩)`.
pub fn shared_factor_pair() -> Vec<ProductState> {
    vec![
        ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]),
        ProductState::from_real(&[1.0, 0.0], &[1.0, 1.0]),
    ]
}

/// The five-state Tiles unextendible product basis in 3×3.
pub fn tiles_upb() -> Vec<ProductState> {
    vec![
        ProductState::from_real(&[1.0, 0.0, 0.0], &[1.0, -1.0, 0.0]),
        ProductState::from_real(&[0.0, 0.0, 1.0], &[0.0, 1.0, -1.0]),
        ProductState::from_real(&[1.0, -1.0, 0.0], &[0.0, 0.0, 1.0]),
        ProductState::from_real(&[0.0, 1.0, -1.0], &[1.0, 0.0, 0.0]),
        ProductState::from_real(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]),
    ]
}
