//! Subspaces of `H_A ⊗ H_B`: spans, complements, product-vector search and
//! completely-entangled-subspace certificates.

pub mod partition;
pub mod schmidt;
pub mod seesaw;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Dims, HermitianOperator, ProductState, PureState};
use crate::tol;

pub use partition::{partition_reference_set, ClassKind, ReferenceClass, ReferencePartition};
pub use schmidt::{schmidt_decompose, two_product_span_entangled, SchmidtData};
pub use seesaw::{seesaw_maximize, seesaw_run, SeesawOptions, SeesawResult, SeesawRun};

/// Orthonormal basis of a subspace of the bipartite space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Subspace {
    basis: Vec<PureState>,
    dims: Dims,
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Residuals below
/// `1e-10` are dropped.
fn gram_schmidt(vectors: impl IntoIterator<Item = DVector<Complex64>>, seed: &[PureState]) -> Vec<PureState> {
    let mut basis: Vec<PureState> = seed.to_vec();
    let start = basis.len();
    for v in vectors {
        let norm0 = v.norm();
        if norm0 < tol::ZERO_VECTOR {
            continue;
        }
        let mut w = v.unscale(norm0);
        for _ in 0..2 {
            for q in &basis {
                let proj = q.amplitudes().dotc(&w);
                w -= q.amplitudes() * proj;
            }
        }
        let residual = w.norm();
        if residual < tol::SPAN_RESIDUAL {
            continue;
        }
        basis.push(PureState::from_vector(w).expect("residual above threshold"));
    }
    basis.split_off(start)
}

/// Orthonormal basis of `span{states}`; linearly dependent inputs are dropped.
pub fn span_orthonormal_basis(states: &[PureState], dims: Dims) -> Result<Subspace> {
    if states.is_empty() {
        return Err(Error::Empty("spanning set"));
    }
    for s in states {
        if s.dim() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: s.dim(),
            });
        }
    }
    let basis = gram_schmidt(states.iter().map(|s| s.amplitudes().clone()), &[]);
    Ok(Subspace { basis, dims })
}

/// `(d_a − 1)(d_b − 1)`.
pub fn max_ces_dimension(dims: Dims) -> usize {
    (dims.d_a - 1) * (dims.d_b - 1)
}

impl Subspace {
    pub fn full(dims: Dims) -> Self {
        let basis = (0..dims.total()).map(|i| PureState::basis(dims.total(), i)).collect();
        Self { basis, dims }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[PureState] {
        &self.basis
    }

    pub fn projector(&self) -> HermitianOperator {
        let n = self.dims.total();
        let mut m = DMatrix::zeros(n, n);
        for v in &self.basis {
            m += v.projector();
        }
        HermitianOperator::new(m).expect("sum of projectors")
    }

    /// `⟨ψ|Π|ψ⟩`.
    pub fn overlap_with(&self, psi: &PureState) -> f64 {
        self.basis
            .iter()
            .map(|v| v.amplitudes().dotc(psi.amplitudes()).norm_sqr())
            .sum()
    }

    /// Basis of the orthogonal complement, from the eigenvectors of `I − Π`
    /// with eigenvalue one.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.dims.total();
        if self.dim() == 0 {
            return Self::full(self.dims);
        }
        let q =
            HermitianOperator::new(DMatrix::identity(n, n) - self.projector().matrix()).expect("complement projector");
        let es = q.eigensystem();
        let candidates: Vec<DVector<Complex64>> = es
            .vectors_above(0.5)
            .into_iter()
            .map(|v| v.amplitudes().clone())
            .collect();
        let basis = gram_schmidt(candidates, &self.basis);
        Subspace { basis, dims: self.dims }
    }
}

/// How a [`CesCertificate`] was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CesDecision {
    /// The zero subspace; not counted as completely entangled.
    Empty,
    /// `dim > (d_a−1)(d_b−1)`, so a product vector must exist.
    DimensionBound,
    /// Settled by the product-overlap search.
    Search,
}

/// Numerical evidence for (or against) a subspace being completely entangled.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CesCertificate {
    pub is_ces: bool,
    /// Best `⟨a⊗b|Π|a⊗b⟩` found.
    pub max_product_overlap: f64,
    pub witness_product_state: Option<ProductState>,
    pub restarts_used: usize,
    pub tolerance: f64,
    pub decided_by: CesDecision,
    /// `is_ces` holds but the overlap came within `1e3·tol` of one.
    pub borderline: bool,
    pub subspace_dim: usize,
    pub max_ces_dim: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CesOptions {
    pub tol: f64,
    pub seesaw: SeesawOptions,
}

impl Default for CesOptions {
    fn default() -> Self {
        Self {
            tol: tol::CES,
            seesaw: SeesawOptions {
                restarts: 50,
                max_iters: 500,
                tol: 1e-13,
                seed: 0,
            },
        }
    }
}

/// Starting `B` factor: leading Schmidt vector of the basis element with the
/// largest Schmidt coefficient.
fn schmidt_seed(s: &Subspace) -> Option<PureState> {
    s.basis
        .iter()
        .filter_map(|v| schmidt_decompose(v, s.dims).ok())
        .max_by(|x, y| x.coefficients[0].total_cmp(&y.coefficients[0]))
        .map(|sd| sd.right_vectors[0].clone())
}

fn overlap_search(s: &Subspace, opts: &SeesawOptions, stop_at: Option<f64>) -> Option<SeesawResult> {
    if s.dim() == 0 {
        return None;
    }
    Some(seesaw_maximize(&s.projector(), s.dims, schmidt_seed(s), opts, stop_at))
}

/// Seesaw search for `max ⟨a⊗b|Π_S|a⊗b⟩` over product states.
///
/// Returns `0` and no maximizer for the zero subspace.
pub fn max_product_overlap(s: &Subspace, opts: &SeesawOptions) -> (f64, Option<ProductState>) {
    match overlap_search(s, opts, None) {
        Some(r) => (r.value.min(1.0), Some(r.maximizer)),
        None => (0.0, None),
    }
}

/// Certifies whether `s` contains no product vector.
pub fn is_ces(s: &Subspace, opts: &CesOptions) -> CesCertificate {
    let max_dim = max_ces_dimension(s.dims);
    let base = CesCertificate {
        is_ces: false,
        max_product_overlap: 0.0,
        witness_product_state: None,
        restarts_used: 0,
        tolerance: opts.tol,
        decided_by: CesDecision::Empty,
        borderline: false,
        subspace_dim: s.dim(),
        max_ces_dim: max_dim,
        seed: opts.seesaw.seed,
    };
    if s.dim() == 0 {
        return base;
    }
    let by_dimension = s.dim() > max_dim;
    // Stop early once a product vector is found; the verdict cannot change.
    let result = overlap_search(s, &opts.seesaw, Some(1.0 - opts.tol)).expect("nonzero subspace");
    let value = result.value.min(1.0);
    let is_ces = !by_dimension && value < 1.0 - opts.tol;
    CesCertificate {
        is_ces,
        max_product_overlap: value,
        witness_product_state: Some(result.maximizer),
        restarts_used: result.restarts_used,
        decided_by: if by_dimension {
            CesDecision::DimensionBound
        } else {
            CesDecision::Search
        },
        borderline: is_ces && value >= 1.0 - tol::CES_BORDERLINE_FACTOR * opts.tol,
        ..base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quantum::random::random_pure_state;
    use crate::quantum::tensor;
    use proptest::prelude::*;

    fn bell_line() -> Subspace {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        span_orthonormal_basis(&[bell], Dims::qubits()).unwrap()
    }

    #[test]
    fn span_drops_duplicates() {
        let zz = PureState::basis(4, 0);
        let pp = tensor(&PureState::plus(), &PureState::plus());
        assert_eq!(
            span_orthonormal_basis(&[zz.clone(), zz.clone()], Dims::qubits())
                .unwrap()
                .dim(),
            1
        );
        assert_eq!(span_orthonormal_basis(&[zz, pp], Dims::qubits()).unwrap().dim(), 2);
    }

    #[test]
    fn tiles_span_rank() {
        // oracle: the Gram matrix of the five tiles is the identity, rank 5
        let tiles = fixtures::tiles_upb();
        let states: Vec<PureState> = tiles.iter().map(|p| p.state().clone()).collect();
        for (i, x) in states.iter().enumerate() {
            for (j, y) in states.iter().enumerate() {
                let g = crate::quantum::overlap(x, y).unwrap().norm();
                assert!((g - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        let span = span_orthonormal_basis(&states, Dims::qutrits()).unwrap();
        assert_eq!(span.dim(), 5);
        assert_eq!(span.orthogonal_complement().dim(), 4);
    }

    #[test]
    fn complement_dimensions() {
        let full = Subspace::full(Dims::qubits());
        assert_eq!(full.orthogonal_complement().dim(), 0);
        let line = span_orthonormal_basis(&[PureState::basis(4, 0)], Dims::qubits()).unwrap();
        assert_eq!(line.orthogonal_complement().dim(), 3);
    }

    #[test]
    fn max_ces_dimension_examples() {
        assert_eq!(max_ces_dimension(Dims::qubits()), 1);
        assert_eq!(max_ces_dimension(Dims::qutrits()), 4);
        assert_eq!(max_ces_dimension(Dims::new(2, 3).unwrap()), 2);
    }

    #[test]
    fn overlap_of_full_space_is_one() {
        let (v, _) = max_product_overlap(&Subspace::full(Dims::qubits()), &SeesawOptions::default());
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_line_overlap_matches_grid() {
        // oracle: dense Bloch-angle grid of |⟨ab|Φ+⟩|²
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let n = 60;
        let mut grid_best: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let ta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
                        let pa = std::f64::consts::TAU * j as f64 / n as f64;
                        let tb = std::f64::consts::PI * k as f64 / (n - 1) as f64;
                        let pb = std::f64::consts::TAU * l as f64 / n as f64;
                        let ab = tensor(&PureState::bloch(ta, pa), &PureState::bloch(tb, pb));
                        grid_best = grid_best.max(crate::quantum::fidelity(&ab, &bell).unwrap());
                    }
                }
            }
        }
        assert!((grid_best - 0.5).abs() < 1e-3);
        let (v, _) = max_product_overlap(&bell_line(), &SeesawOptions::default());
        assert!((v - 0.5).abs() < 1e-10);
    }

    #[test]
    fn ces_examples() {
        let line = span_orthonormal_basis(&[PureState::basis(4, 0)], Dims::qubits()).unwrap();
        let cert = is_ces(&line, &CesOptions::default());
        assert!(!cert.is_ces);
        assert!((cert.max_product_overlap - 1.0).abs() < 1e-12);

        let cert = is_ces(&bell_line(), &CesOptions::default());
        assert!(cert.is_ces);
        assert!((cert.max_product_overlap - 0.5).abs() < 1e-10);
        assert_eq!(cert.decided_by, CesDecision::Search);
        assert!(!cert.borderline);

        let dims = Dims::new(2, 3).unwrap();
        let states: Vec<PureState> = (0..5).map(|s| random_pure_state(6, s)).collect();
        let big = span_orthonormal_basis(&states, dims).unwrap();
        assert_eq!(big.dim(), 5);
        let cert = is_ces(&big, &CesOptions::default());
        assert!(!cert.is_ces);
        assert_eq!(cert.decided_by, CesDecision::DimensionBound);
    }

    #[test]
    fn tiles_complement_is_ces() {
        let states: Vec<PureState> = fixtures::tiles_upb().iter().map(|p| p.state().clone()).collect();
        let k = span_orthonormal_basis(&states, Dims::qutrits())
            .unwrap()
            .orthogonal_complement();
        let cert = is_ces(&k, &CesOptions::default());
        assert!(cert.is_ces, "{cert:?}");
        assert!(cert.max_product_overlap < 1.0 - 1e-3);
        assert_eq!(cert.restarts_used, 50);
    }

    #[test]
    fn zero_subspace_is_not_ces() {
        let cert = is_ces(
            &Subspace::full(Dims::qubits()).orthogonal_complement(),
            &CesOptions::default(),
        );
        assert!(!cert.is_ces);
        assert_eq!(cert.decided_by, CesDecision::Empty);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn complement_is_orthogonal(seed in 0u64..1000, k in 1usize..6) {
            let dims = Dims::new(2, 3).unwrap();
            let states: Vec<PureState> = (0..k as u64).map(|i| random_pure_state(6, seed * 7 + i)).collect();
            let s = span_orthonormal_basis(&states, dims).unwrap();
            let c = s.orthogonal_complement();
            prop_assert_eq!(s.dim() + c.dim(), 6);
            for u in s.basis() {
                for v in c.basis() {
                    prop_assert!(crate::quantum::overlap(u, v).unwrap().norm() < 1e-9);
                }
            }
            for (i, u) in c.basis().iter().enumerate() {
                for v in &c.basis()[..i] {
                    prop_assert!(crate::quantum::overlap(u, v).unwrap().norm() < 1e-10);
                }
            }
        }
    }
}
