use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::eigen::jacobi_svd;
use crate::quantum::{overlap, Dims, ProductState, PureState};
use crate::tol;

/// Schmidt decomposition `|ψ⟩ = Σ sₖ |uₖ⟩⊗|vₖ⟩`.
#[derive(Debug, Clone, Serialize)]
pub struct SchmidtData {
    /// All `min(d_a, d_b)` coefficients, descending.
    pub coefficients: Vec<f64>,
    /// Number of coefficients above `1e-10`.
    pub rank: usize,
    /// `|uₖ⟩` for `k < rank`.
    pub left_vectors: Vec<PureState>,
    /// `|vₖ⟩` for `k < rank`.
    pub right_vectors: Vec<PureState>,
}

impl SchmidtData {
    pub fn is_product(&self) -> bool {
        self.rank == 1
    }

    /// `|u₀⟩⊗|v₀⟩`, the closest product state.
    pub fn leading_product(&self) -> ProductState {
        ProductState::new(self.left_vectors[0].clone(), self.right_vectors[0].clone())
            .expect("local dims are at least 2")
    }
}

/// SVD of the `d_a×d_b` coefficient matrix `C_ij = ψ_{i·d_b+j}`.
pub fn schmidt_decompose(psi: &PureState, dims: Dims) -> Result<SchmidtData> {
    if psi.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: psi.dim(),
        });
    }
    let amps = psi.amplitudes();
    let c = DMatrix::from_fn(dims.d_a, dims.d_b, |i, j| amps[dims.index(i, j)]);
    let svd = jacobi_svd(&c);
    let rank = svd.singular_values.iter().filter(|&&s| s > tol::SCHMIDT_RANK).count();
    let left_vectors = svd.left[..rank]
        .iter()
        .map(|u| PureState::from_vector(u.clone()).expect("nonzero singular vector"))
        .collect();
    // C = U Σ V†, so the B-side Schmidt vectors are conj(V[:, k]).
    let right_vectors = svd.right[..rank]
        .iter()
        .map(|v| PureState::from_vector(v.conjugate()).expect("unitary column"))
        .collect();
    Ok(SchmidtData {
        coefficients: svd.singular_values,
        rank,
        left_vectors,
        right_vectors,
    })
}

/// True when `|ψ₁⟩, |ψ₂⟩` share no local factor (up to phase) on either side,
/// in which case every `α|ψ₁⟩ + β|ψ₂⟩` with `αβ ≠ 0` is entangled.
pub fn two_product_span_entangled(p1: &ProductState, p2: &ProductState) -> Result<bool> {
    p1.check_dims(p2)?;
    let la = overlap(p1.a(), p2.a())?.norm();
    let lb = overlap(p1.b(), p2.b())?.norm();
    Ok(la < 1.0 - tol::LOCAL_OVERLAP && lb < 1.0 - tol::LOCAL_OVERLAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random::{random_product_state, random_pure_state, rng};
    use crate::quantum::{fidelity, tensor};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn product_has_rank_one() {
        let s = schmidt_decompose(&PureState::basis(4, 0), Dims::qubits()).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_has_rank_two() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let s = schmidt_decompose(&bell, Dims::qubits()).unwrap();
        assert_eq!(s.rank, 2);
        for c in &s.coefficients {
            assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn top_eigenvector_of_example_pair_is_entangled() {
        // η = c̄/|c| = 1 for ⟨00|++⟩ = 1/2
        let zz = tensor(&PureState::basis(2, 0), &PureState::basis(2, 0));
        let pp = tensor(&PureState::plus(), &PureState::plus());
        let v: Vec<Complex64> = zz.to_vec().iter().zip(pp.to_vec()).map(|(x, y)| x + y).collect();
        let phi = crate::quantum::normalize(&v).unwrap();
        let s = schmidt_decompose(&phi, Dims::qubits()).unwrap();
        assert_eq!(s.rank, 2);
        // oracle: determinant of the 2×2 coefficient matrix is nonzero
        let a = phi.amplitudes();
        let det = a[0] * a[3] - a[1] * a[2];
        assert!(det.norm() > 1e-3);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(schmidt_decompose(&PureState::basis(5, 0), Dims::qubits()).is_err());
    }

    #[test]
    fn shared_factor_detection() {
        let zz = ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]);
        let pp = ProductState::from_real(&[1.0, 1.0], &[1.0, 1.0]);
        let z1 = ProductState::from_real(&[1.0, 0.0], &[0.0, 1.0]);
        let oo = ProductState::from_real(&[0.0, 1.0], &[0.0, 1.0]);
        assert!(two_product_span_entangled(&zz, &pp).unwrap());
        assert!(!two_product_span_entangled(&zz, &z1).unwrap());
        assert!(two_product_span_entangled(&zz, &oo).unwrap());
    }

    proptest! {
        #[test]
        fn reconstruction_and_rank_one_criterion(seed in 0u64..500, product in any::<bool>()) {
            let dims = Dims::new(2 + (seed % 2) as usize, 3).unwrap();
            let psi = if product {
                random_product_state(dims, seed).state().clone()
            } else {
                random_pure_state(dims.total(), seed)
            };
            let s = schmidt_decompose(&psi, dims).unwrap();
            let norm2: f64 = s.coefficients.iter().map(|c| c * c).sum();
            prop_assert!((norm2 - 1.0).abs() < 1e-10);
            let mut recon = nalgebra::DVector::<Complex64>::zeros(dims.total());
            for k in 0..s.rank {
                recon += tensor(&s.left_vectors[k], &s.right_vectors[k]).amplitudes().scale(s.coefficients[k]);
            }
            prop_assert!((recon - psi.amplitudes()).norm() < 1e-9);
            let lead = tensor(&s.left_vectors[0], &s.right_vectors[0]);
            let is_product = (fidelity(&psi, &lead).unwrap() - 1.0).abs() < 1e-9;
            prop_assert_eq!(s.rank == 1, is_product);
            prop_assert_eq!(s.rank == 1, product);
        }

        #[test]
        fn span_of_unshared_products_is_entangled(seed in 0u64..300) {
            let dims = Dims::new(2, 3).unwrap();
            let p1 = random_product_state(dims, 2 * seed);
            let p2 = random_product_state(dims, 2 * seed + 1);
            prop_assume!(two_product_span_entangled(&p1, &p2).unwrap());
            let mut r = rng(seed);
            for _ in 0..10 {
                let alpha = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
                let beta = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
                let v: Vec<Complex64> = p1.state().to_vec().iter().zip(p2.state().to_vec())
                    .map(|(x, y)| alpha * x + beta * y).collect();
                let phi = crate::quantum::normalize(&v).unwrap();
                prop_assert_eq!(schmidt_decompose(&phi, dims).unwrap().rank, 2);
            }
        }
    }
}
