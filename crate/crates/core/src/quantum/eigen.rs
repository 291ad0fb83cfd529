//! Cyclic Jacobi diagonalization of small complex Hermitian matrices, and the
//! one-sided (Hestenes) variant used for singular value decompositions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::operator::HermitianOperator;
use super::state::PureState;
use crate::tol;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition with eigenvalues in descending order.
#[derive(Debug, Clone, Serialize)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<PureState>,
    pub max_eigenspace_dim: usize,
}

impl EigenSystem {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn lambda_min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// Orthonormal basis of the eigenspace of `λ_max`.
    pub fn max_eigenspace(&self) -> &[PureState] {
        &self.eigenvectors[..self.max_eigenspace_dim]
    }

    /// Eigenvectors whose eigenvalue exceeds `threshold`.
    pub fn vectors_above(&self, threshold: f64) -> Vec<PureState> {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .filter(|(l, _)| **l > threshold)
            .map(|(_, v)| v.clone())
            .collect()
    }
}

/// Unitary 2×2 rotation `J` with `J† [[app, apq], [conj(apq), aqq]] J` diagonal.
///
/// Stored as `(j_pp, j_pq, j_qp, j_qq)`.
#[derive(Clone, Copy)]
struct Rotation {
    pp: Complex64,
    pq: Complex64,
    qp: Complex64,
    qq: Complex64,
}

impl Rotation {
    fn new(app: f64, aqq: f64, apq: Complex64) -> Self {
        let r = apq.norm();
        let phase = if r > 0.0 {
            apq.conj() / r
        } else {
            Complex64::new(1.0, 0.0)
        };
        let theta = (aqq - app) / (2.0 * r);
        let t = if theta.is_finite() {
            let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
            sign / (theta.abs() + (theta * theta + 1.0).sqrt())
        } else {
            0.0
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        // J = diag(1, e^{-iφ}) · [[c, s], [-s, c]]
        Self {
            pp: Complex64::new(c, 0.0),
            pq: Complex64::new(s, 0.0),
            qp: phase * (-s),
            qq: phase * c,
        }
    }

    /// `X ← X J` on columns `p`, `q`.
    fn apply_right(&self, x: &mut DMatrix<Complex64>, p: usize, q: usize) {
        for k in 0..x.nrows() {
            let xp = x[(k, p)];
            let xq = x[(k, q)];
            x[(k, p)] = xp * self.pp + xq * self.qp;
            x[(k, q)] = xp * self.pq + xq * self.qq;
        }
    }

    /// `X ← J† X` on rows `p`, `q`.
    fn apply_left_adjoint(&self, x: &mut DMatrix<Complex64>, p: usize, q: usize) {
        for k in 0..x.ncols() {
            let xp = x[(p, k)];
            let xq = x[(q, k)];
            x[(p, k)] = self.pp.conj() * xp + self.qp.conj() * xq;
            x[(q, k)] = self.pq.conj() * xp + self.qq.conj() * xq;
        }
    }
}

fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Full spectral decomposition of `h` by cyclic Jacobi sweeps.
///
/// Eigenvalues are sorted descending; each eigenvector has its
/// largest-modulus component real positive.
pub fn hermitian_eigensystem(h: &HermitianOperator) -> EigenSystem {
    let mut a = h.matrix().clone();
    let n = a.nrows();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    let scale = a.norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let rot = Rotation::new(a[(p, p)].re, a[(q, q)].re, apq);
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                rot.apply_right(&mut v, p, q);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors: Vec<PureState> = order
        .iter()
        .map(|&i| {
            let col = v.column(i).into_owned();
            let norm = col.norm();
            PureState::from_normalized_unchecked(col.unscale(norm)).canonical_phase()
        })
        .collect();
    let top = eigenvalues[0];
    let max_eigenspace_dim = eigenvalues.iter().take_while(|&&l| top - l <= tol::DEGENERACY).count();
    EigenSystem {
        eigenvalues,
        eigenvectors,
        max_eigenspace_dim,
    }
}

/// Thin singular value decomposition `C = U Σ V†` of a small complex matrix.
pub(crate) struct Svd {
    /// Descending singular values, `min(m, n)` of them.
    pub singular_values: Vec<f64>,
    /// Left singular vectors (columns of `U`), one per singular value.
    pub left: Vec<nalgebra::DVector<Complex64>>,
    /// Right singular vectors (columns of `V`), one per singular value.
    pub right: Vec<nalgebra::DVector<Complex64>>,
}

/// One-sided Jacobi SVD: rotates column pairs of `C` until they are
/// mutually orthogonal. Small singular values keep high relative accuracy.
pub(crate) fn jacobi_svd(c: &DMatrix<Complex64>) -> Svd {
    let (m, n) = c.shape();
    let mut w = c.clone();
    let mut v = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() <= 1e-300 {
                    continue;
                }
                rotated = true;
                let rot = Rotation::new(alpha, beta, gamma);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, w.column(j).norm())).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1));
    order.truncate(m.min(n));
    let mut singular_values = Vec::with_capacity(order.len());
    let mut left = Vec::with_capacity(order.len());
    let mut right = Vec::with_capacity(order.len());
    for (j, s) in order {
        singular_values.push(s);
        let col = w.column(j).into_owned();
        left.push(if s > 0.0 { col.unscale(s) } else { col });
        right.push(v.column(j).into_owned());
    }
    Svd {
        singular_values,
        left,
        right,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random::{random_matrix, random_pure_state};
    use crate::quantum::state::{tensor, PureState};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix() {
        let h = HermitianOperator::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)],
        ))
        .unwrap();
        let es = hermitian_eigensystem(&h);
        assert_eq!(es.eigenvalues, vec![2.0, 1.0]);
        assert_eq!(es.eigenvectors[0], PureState::basis(2, 1));
        assert_eq!(es.eigenvectors[1], PureState::basis(2, 0));
        assert_eq!(es.max_eigenspace_dim, 1);
    }

    #[test]
    fn identity_is_fully_degenerate() {
        let h = HermitianOperator::identity(4);
        let es = hermitian_eigensystem(&h);
        assert!(es.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 1e-15));
        assert_eq!(es.max_eigenspace_dim, 4);
    }

    #[test]
    fn example_pair_top_eigenvalue() {
        let p00 = tensor(&PureState::basis(2, 0), &PureState::basis(2, 0));
        let ppp = tensor(&PureState::plus(), &PureState::plus());
        let m = HermitianOperator::new(p00.projector() + ppp.projector()).unwrap();
        let es = hermitian_eigensystem(&m);
        assert!((es.lambda_max() - 1.5).abs() < 1e-12);
        assert!((es.eigenvalues[1] - 0.5).abs() < 1e-12);
        assert!(es.eigenvalues[2].abs() < 1e-12);
    }

    #[test]
    fn random_hermitian_decomposition() {
        for seed in 0..20 {
            let g = random_matrix(7, seed);
            let h = HermitianOperator::new((&g + g.adjoint()).scale(0.5)).unwrap();
            let es = hermitian_eigensystem(&h);
            let trace: f64 = (0..7).map(|i| h.matrix()[(i, i)].re).sum();
            let sum: f64 = es.eigenvalues.iter().sum();
            assert!((trace - sum).abs() < 1e-9);
            let mut recon = DMatrix::<Complex64>::zeros(7, 7);
            for (l, v) in es.eigenvalues.iter().zip(&es.eigenvectors) {
                let hv = h.matrix() * v.amplitudes();
                assert!((hv - v.amplitudes().scale(*l)).norm() < 1e-9);
                recon += v.projector().scale(*l);
            }
            assert!((recon - h.matrix()).camax() < 1e-8);
            for i in 0..7 {
                for j in 0..i {
                    let o = es.eigenvectors[i].amplitudes().dotc(es.eigenvectors[j].amplitudes());
                    assert!(o.norm() < 1e-9);
                }
            }
            assert!(es.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn canonical_phase_of_eigenvectors() {
        let g = random_matrix(5, 3);
        let h = HermitianOperator::new((&g + g.adjoint()).scale(0.5)).unwrap();
        for v in hermitian_eigensystem(&h).eigenvectors {
            let (imax, zmax) = v
                .amplitudes()
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
                .unwrap();
            assert!(zmax.im.abs() < 1e-12 && zmax.re > 0.0, "component {imax}");
        }
    }

    #[test]
    fn svd_of_rank_one_matrix() {
        let a = random_pure_state(3, 1);
        let b = random_pure_state(4, 2);
        let cmat = a.amplitudes() * b.amplitudes().transpose();
        let svd = jacobi_svd(&cmat);
        assert_eq!(svd.singular_values.len(), 3);
        assert!((svd.singular_values[0] - 1.0).abs() < 1e-12);
        assert!(svd.singular_values[1] < 1e-14);
    }

    #[test]
    fn svd_reconstructs() {
        let cmat = random_matrix(3, 11).columns(0, 2).into_owned();
        let svd = jacobi_svd(&cmat);
        let mut recon = DMatrix::<Complex64>::zeros(3, 2);
        for k in 0..2 {
            recon += (&svd.left[k] * svd.right[k].adjoint()).scale(svd.singular_values[k]);
        }
        assert!((recon - cmat).camax() < 1e-12);
    }
}
