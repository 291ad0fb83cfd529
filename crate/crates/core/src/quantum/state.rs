use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Local dimensions of a bipartite space `H_A ⊗ H_B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DimsRepr")]
pub struct Dims {
    pub d_a: usize,
    pub d_b: usize,
}

#[derive(Deserialize)]
struct DimsRepr {
    d_a: usize,
    d_b: usize,
}

impl TryFrom<DimsRepr> for Dims {
    type Error = Error;

    fn try_from(r: DimsRepr) -> Result<Self> {
        Dims::new(r.d_a, r.d_b)
    }
}

impl Dims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::InvalidDims { d_a, d_b });
        }
        Ok(Self { d_a, d_b })
    }

    pub const fn qubits() -> Self {
        Self { d_a: 2, d_b: 2 }
    }

    pub const fn qutrits() -> Self {
        Self { d_a: 3, d_b: 3 }
    }

    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    /// Row-major composite index of `|i⟩⊗|j⟩`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.d_b + j
    }
}

/// A normalized pure state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr", into = "StateRepr")]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    amplitudes: Vec<Complex64>,
}

impl TryFrom<StateRepr> for PureState {
    type Error = Error;

    fn try_from(r: StateRepr) -> Result<Self> {
        let v = DVector::from_vec(r.amplitudes);
        if (v.norm() - 1.0).abs() <= tol::NORMALIZATION && v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Ok(Self { amplitudes: v });
        }
        Self::from_vector(v)
    }
}

impl From<PureState> for StateRepr {
    fn from(s: PureState) -> Self {
        StateRepr {
            amplitudes: s.amplitudes.iter().copied().collect(),
        }
    }
}

/// Scales `v` to unit Euclidean norm, keeping its global phase.
pub fn normalize(v: &[Complex64]) -> Result<PureState> {
    PureState::from_vector(DVector::from_column_slice(v))
}

impl PureState {
    pub fn from_vector(v: DVector<Complex64>) -> Result<Self> {
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if v.is_empty() {
            return Err(Error::Empty("state vector"));
        }
        let norm = v.norm();
        if norm < tol::ZERO_VECTOR {
            return Err(Error::ZeroVector(norm));
        }
        Ok(Self {
            amplitudes: v.unscale(norm),
        })
    }

    /// Builds a state from real amplitudes, normalizing them.
    pub fn from_real(v: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        normalize(&c)
    }

    /// Computational basis vector `|index⟩` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        Self::from_real(&[1.0, 1.0]).expect("nonzero")
    }

    /// `(|0⟩ − |1⟩)/√2`.
    pub fn minus() -> Self {
        Self::from_real(&[1.0, -1.0]).expect("nonzero")
    }

    /// Qubit state on the Bloch sphere: `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let v = DVector::from_column_slice(&[Complex64::new(c, 0.0), Complex64::from_polar(s, phi)]);
        Self { amplitudes: v }
    }

    pub(crate) fn from_normalized_unchecked(v: DVector<Complex64>) -> Self {
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn to_vec(&self) -> Vec<Complex64> {
        self.amplitudes.iter().copied().collect()
    }

    /// Multiplies by a global phase `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        Self {
            amplitudes: self.amplitudes.scale_complex(Complex64::from_polar(1.0, phi)),
        }
    }

    /// Fixes the global phase so the largest-modulus component is real positive.
    pub fn canonical_phase(&self) -> Self {
        let mut best = 0;
        let mut best_norm = -1.0;
        for (i, z) in self.amplitudes.iter().enumerate() {
            let n = z.norm();
            if n > best_norm + tol::PHASE_TIE {
                best = i;
                best_norm = n;
            }
        }
        let z = self.amplitudes[best];
        if best_norm <= 0.0 {
            return self.clone();
        }
        let phase = z.conj() / best_norm;
        Self {
            amplitudes: self.amplitudes.scale_complex(phase),
        }
    }

    /// `|ψ⟩⟨ψ|` as a dense matrix.
    pub fn projector(&self) -> nalgebra::DMatrix<Complex64> {
        &self.amplitudes * self.amplitudes.adjoint()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

trait ScaleComplex {
    fn scale_complex(&self, z: Complex64) -> Self;
}

impl ScaleComplex for DVector<Complex64> {
    fn scale_complex(&self, z: Complex64) -> Self {
        self.map(|w| w * z)
    }
}

/// `⟨phi|psi⟩`, conjugating the first argument.
pub fn overlap(phi: &PureState, psi: &PureState) -> Result<Complex64> {
    if phi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: phi.dim(),
            found: psi.dim(),
        });
    }
    Ok(phi.amplitudes.dotc(&psi.amplitudes))
}

/// `|⟨phi|psi⟩|²`.
pub fn fidelity(phi: &PureState, psi: &PureState) -> Result<f64> {
    Ok(overlap(phi, psi)?.norm_sqr().min(1.0))
}

/// Row-major tensor product: component `i·d_b + j` is `a_i b_j`.
pub fn tensor(a: &PureState, b: &PureState) -> PureState {
    let (da, db) = (a.dim(), b.dim());
    let mut v = DVector::zeros(da * db);
    for i in 0..da {
        for j in 0..db {
            v[i * db + j] = a.amplitudes[i] * b.amplitudes[j];
        }
    }
    PureState { amplitudes: v }
}

/// A pure product state `|a⟩⊗|b⟩` that keeps its factorization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProductRepr", into = "ProductRepr")]
pub struct ProductState {
    a: PureState,
    b: PureState,
    dims: Dims,
    joint: PureState,
}

#[derive(Serialize, Deserialize)]
struct ProductRepr {
    a: PureState,
    b: PureState,
}

impl TryFrom<ProductRepr> for ProductState {
    type Error = Error;

    fn try_from(r: ProductRepr) -> Result<Self> {
        ProductState::new(r.a, r.b)
    }
}

impl From<ProductState> for ProductRepr {
    fn from(p: ProductState) -> Self {
        ProductRepr { a: p.a, b: p.b }
    }
}

impl ProductState {
    pub fn new(a: PureState, b: PureState) -> Result<Self> {
        let dims = Dims::new(a.dim(), b.dim())?;
        let joint = tensor(&a, &b);
        Ok(Self { a, b, dims, joint })
    }

    /// Product of two computational-basis / real-amplitude factors; panics on
    /// zero vectors, intended for fixtures.
    pub fn from_real(a: &[f64], b: &[f64]) -> Self {
        Self::new(
            PureState::from_real(a).expect("nonzero factor"),
            PureState::from_real(b).expect("nonzero factor"),
        )
        .expect("valid dims")
    }

    pub fn a(&self) -> &PureState {
        &self.a
    }

    pub fn b(&self) -> &PureState {
        &self.b
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    /// The tensored vector `|a⟩⊗|b⟩`.
    pub fn state(&self) -> &PureState {
        &self.joint
    }

    /// `|⟨a₁|a₂⟩|` and `|⟨b₁|b₂⟩|`.
    pub fn local_overlaps(&self, other: &ProductState) -> Result<(f64, f64)> {
        self.check_dims(other)?;
        Ok((overlap(&self.a, &other.a)?.norm(), overlap(&self.b, &other.b)?.norm()))
    }

    /// Local fidelities `(c_A, c_B)`.
    pub fn local_fidelities(&self, other: &ProductState) -> Result<(f64, f64)> {
        let (la, lb) = self.local_overlaps(other)?;
        Ok(((la * la).min(1.0), (lb * lb).min(1.0)))
    }

    pub(crate) fn check_dims(&self, other: &ProductState) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total(),
                found: other.dims.total(),
            });
        }
        Ok(())
    }
}
