use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{hermitian_eigensystem, EigenSystem};
use super::state::{Dims, PureState};
use crate::error::{Error, Result};
use crate::tol;

/// Dense complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct HermitianOperator {
    entries: DMatrix<Complex64>,
}

/// Row-major nested arrays of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRepr(pub Vec<Vec<Complex64>>);

impl MatrixRepr {
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Self {
        MatrixRepr(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
                .collect(),
        )
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        let n = self.0.len();
        if n == 0 {
            return Err(Error::Empty("matrix"));
        }
        for row in &self.0 {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Ok(DMatrix::from_fn(n, n, |i, j| self.0[i][j]))
    }
}

impl TryFrom<MatrixRepr> for HermitianOperator {
    type Error = Error;

    fn try_from(r: MatrixRepr) -> Result<Self> {
        HermitianOperator::new(r.to_matrix()?)
    }
}

impl From<HermitianOperator> for MatrixRepr {
    fn from(h: HermitianOperator) -> Self {
        MatrixRepr::from_matrix(&h.entries)
    }
}

fn max_asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

impl HermitianOperator {
    /// Accepts matrices Hermitian within `1e-9`; the stored copy is exactly
    /// Hermitian.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let asym = max_asymmetry(&m);
        if asym > tol::HERMITIAN {
            return Err(Error::NotHermitian(asym));
        }
        let entries = (&m + m.adjoint()).scale(0.5);
        Ok(Self { entries })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    /// `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`.
    pub fn weighted_projectors(states: &[&PureState], weights: &[f64]) -> Result<Self> {
        if states.len() != weights.len() {
            return Err(Error::WrongArity {
                expected: states.len(),
                found: weights.len(),
            });
        }
        let dim = states.first().ok_or(Error::Empty("projector list"))?.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (s, &w) in states.iter().zip(weights) {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
            if !w.is_finite() {
                return Err(Error::NonFinite);
            }
            m += s.projector().scale(w);
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn eigensystem(&self) -> EigenSystem {
        hermitian_eigensystem(self)
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        let v = psi.amplitudes();
        Ok(v.dotc(&(&self.entries * v)).re)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    /// `Tr(self · other)`.
    pub fn trace_product(&self, other: &DMatrix<Complex64>) -> Result<f64> {
        if other.nrows() != self.dim() || other.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.nrows(),
            });
        }
        let n = self.dim();
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                s += self.entries[(i, j)] * other[(j, i)];
            }
        }
        Ok(s.re)
    }

    /// `U H U†`.
    pub fn conjugate_by(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        Self::new(u * &self.entries * u.adjoint())
    }
}

/// Mixed state on a bipartite space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityRepr", into = "DensityRepr")]
pub struct DensityOperator {
    op: DensityRepr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct DensityRepr {
    entries: HermitianOperator,
    dims: Dims,
}

impl TryFrom<DensityRepr> for DensityOperator {
    type Error = Error;

    fn try_from(r: DensityRepr) -> Result<Self> {
        DensityOperator::new(r.entries.entries, r.dims)
    }
}

impl From<DensityOperator> for DensityRepr {
    fn from(d: DensityOperator) -> Self {
        d.op
    }
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(m: DMatrix<Complex64>, dims: Dims) -> Result<Self> {
        if m.nrows() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: m.nrows(),
            });
        }
        let entries = HermitianOperator::new(m)?;
        let tr = entries.trace();
        if (tr - 1.0).abs() > tol::DENSITY_TRACE {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let lmin = entries.eigensystem().lambda_min();
        if lmin < -tol::DENSITY_POSITIVITY {
            return Err(Error::InvalidDensity(format!("minimum eigenvalue {lmin:e}")));
        }
        Ok(Self {
            op: DensityRepr { entries, dims },
        })
    }

    pub fn pure(psi: &PureState, dims: Dims) -> Result<Self> {
        Self::new(psi.projector(), dims)
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        Self::new(DMatrix::identity(n, n).unscale(n as f64), dims).expect("valid")
    }

    /// `Σ wᵢ |ψᵢ⟩⟨ψᵢ|` with weights normalized to sum one.
    pub fn mixture(states: &[PureState], weights: &[f64], dims: Dims) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| *w < 0.0) || total <= 0.0 {
            return Err(Error::InvalidDensity("weights must be nonnegative".into()));
        }
        let refs: Vec<&PureState> = states.iter().collect();
        let normalized: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let h = HermitianOperator::weighted_projectors(&refs, &normalized)?;
        Self::new(h.entries, dims)
    }

    /// Normalized projector onto the span of an orthonormal family.
    pub fn normalized_projector(basis: &[PureState], dims: Dims) -> Result<Self> {
        let n = basis.len();
        if n == 0 {
            return Err(Error::Empty("projector basis"));
        }
        let weights = vec![1.0 / n as f64; n];
        Self::mixture(basis, &weights, dims)
    }

    pub fn dims(&self) -> Dims {
        self.op.dims
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op.entries
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        self.op.entries.matrix()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        self.op.entries.expectation(psi)
    }

    /// Basis of the support (eigenvalues above `1e-10`).
    pub fn support(&self) -> Vec<PureState> {
        self.op.entries.eigensystem().vectors_above(tol::SUPPORT)
    }
}

/// Which tensor factor a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

/// Partial transpose over subsystem `A` or `B`.
pub fn partial_transpose(m: &DMatrix<Complex64>, dims: Dims, subsystem: Subsystem) -> Result<HermitianOperator> {
    let n = dims.total();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.nrows(),
        });
    }
    let mut out = DMatrix::zeros(n, n);
    for i in 0..dims.d_a {
        for j in 0..dims.d_b {
            for k in 0..dims.d_a {
                for l in 0..dims.d_b {
                    let (r, c) = match subsystem {
                        Subsystem::A => (dims.index(k, j), dims.index(i, l)),
                        Subsystem::B => (dims.index(i, l), dims.index(k, j)),
                    };
                    out[(r, c)] = m[(dims.index(i, j), dims.index(k, l))];
                }
            }
        }
    }
    HermitianOperator::new(out)
}

impl DensityOperator {
    pub fn partial_transpose(&self, subsystem: Subsystem) -> HermitianOperator {
        partial_transpose(self.matrix(), self.dims(), subsystem).expect("consistent dims")
    }
}
