//! Alternating ("seesaw") maximization of `⟨a⊗b|M|a⊗b⟩` over product states.
//!
//! With one factor fixed the objective is a Hermitian form in the other, so
//! each half-step is solved exactly by a top eigenvector and the objective
//! never decreases along a run.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quantum::random::{derive_seed, haar_state, rng};
use crate::quantum::{Dims, HermitianOperator, ProductState, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub max_iters: usize,
    /// A run stops once a full sweep improves the objective by less than this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_iters: 500,
            tol: 1e-13,
            seed: 0,
        }
    }
}

/// One seesaw run from a fixed starting point.
#[derive(Debug, Clone)]
pub struct SeesawRun {
    pub value: f64,
    pub a: PureState,
    pub b: PureState,
    /// Objective after every half-step.
    pub history: Vec<f64>,
    pub iterations: usize,
}

/// Best result over all restarts.
#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub value: f64,
    pub maximizer: ProductState,
    pub restarts_used: usize,
    pub best_restart: usize,
}

/// `(I⊗⟨b|) M (I⊗|b⟩)`, a `d_a×d_a` Hermitian matrix.
pub fn reduce_on_b(m: &DMatrix<Complex64>, dims: Dims, b: &PureState) -> HermitianOperator {
    let (da, db) = (dims.d_a, dims.d_b);
    let bv = b.amplitudes();
    let mut out = DMatrix::zeros(da, da);
    for i in 0..da {
        for j in 0..da {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..db {
                let bk = bv[k].conj();
                for l in 0..db {
                    s += bk * m[(i * db + k, j * db + l)] * bv[l];
                }
            }
            out[(i, j)] = s;
        }
    }
    HermitianOperator::new(out).expect("compression of a Hermitian matrix")
}

/// `(⟨a|⊗I) M (|a⟩⊗I)`, a `d_b×d_b` Hermitian matrix.
pub fn reduce_on_a(m: &DMatrix<Complex64>, dims: Dims, a: &PureState) -> HermitianOperator {
    let (da, db) = (dims.d_a, dims.d_b);
    let av = a.amplitudes();
    let mut out = DMatrix::zeros(db, db);
    for k in 0..db {
        for l in 0..db {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..da {
                let ai = av[i].conj();
                for j in 0..da {
                    s += ai * m[(i * db + k, j * db + l)] * av[j];
                }
            }
            out[(k, l)] = s;
        }
    }
    HermitianOperator::new(out).expect("compression of a Hermitian matrix")
}

fn top(h: &HermitianOperator) -> (f64, PureState) {
    let es = h.eigensystem();
    (es.eigenvalues[0], es.eigenvectors[0].clone())
}

/// Runs one alternating ascent starting from the `B` factor `b0`.
pub fn seesaw_run(m: &HermitianOperator, dims: Dims, b0: PureState, opts: &SeesawOptions) -> SeesawRun {
    let mat = m.matrix();
    let mut b = b0;
    let (mut value, mut a) = top(&reduce_on_b(mat, dims, &b));
    let mut history = vec![value];
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let start = value;
        let (vb, nb) = top(&reduce_on_a(mat, dims, &a));
        // Never accept a rounding-level decrease.
        if vb >= value {
            value = vb;
            b = nb;
        }
        history.push(value);
        let (va, na) = top(&reduce_on_b(mat, dims, &b));
        if va >= value {
            value = va;
            a = na;
        }
        history.push(value);
        if value - start < opts.tol {
            break;
        }
    }
    SeesawRun {
        value,
        a,
        b,
        history,
        iterations,
    }
}

/// Best seesaw value over `opts.restarts` runs.
///
/// Restart 0 starts from `init_b` when given; the others start from
/// Haar-random `B` factors seeded by `derive_seed(opts.seed, r)`. When
/// `stop_at` is reached the remaining restarts are skipped.
pub fn seesaw_maximize(
    m: &HermitianOperator,
    dims: Dims,
    init_b: Option<PureState>,
    opts: &SeesawOptions,
    stop_at: Option<f64>,
) -> SeesawResult {
    assert_eq!(m.dim(), dims.total(), "operator does not act on the bipartite space");
    let restarts = opts.restarts.max(1);
    let mut best: Option<(SeesawRun, usize)> = None;
    let mut used = 0;
    for r in 0..restarts {
        let b0 = match (r, &init_b) {
            (0, Some(b)) => b.clone(),
            _ => haar_state(dims.d_b, &mut rng(derive_seed(opts.seed, r as u64))),
        };
        let run = seesaw_run(m, dims, b0, opts);
        used += 1;
        let better = best.as_ref().is_none_or(|(b, _)| run.value > b.value);
        if better {
            best = Some((run, r));
        }
        if let (Some(target), Some((b, _))) = (stop_at, &best) {
            if b.value >= target {
                break;
            }
        }
    }
    let (run, best_restart) = best.expect("at least one restart");
    SeesawResult {
        value: run.value,
        maximizer: ProductState::new(run.a, run.b).expect("dims validated"),
        restarts_used: used,
        best_restart,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random::{random_pure_state, random_unitary};
    use crate::quantum::tensor;

    #[test]
    fn runs_are_monotone() {
        for (seed, dims) in [(1, Dims::qubits()), (2, Dims::new(2, 3).unwrap()), (3, Dims::qutrits())] {
            let n = dims.total();
            let u = random_unitary(n, seed);
            let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
            let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                n,
                diag.iter().map(|&x| Complex64::new(x, 0.0)),
            ));
            let m = HermitianOperator::new(&u * d * u.adjoint()).unwrap();
            for r in 0..5 {
                let run = seesaw_run(
                    &m,
                    dims,
                    random_pure_state(dims.d_b, seed * 10 + r),
                    &SeesawOptions::default(),
                );
                for w in run.history.windows(2) {
                    assert!(w[1] >= w[0], "decrease {} -> {}", w[0], w[1]);
                }
                let psi = tensor(&run.a, &run.b);
                assert!((m.expectation(&psi).unwrap() - run.value).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reduced_operators_match_expectation() {
        let dims = Dims::new(2, 3).unwrap();
        let u = random_unitary(6, 4);
        let m = HermitianOperator::new(
            &u * DMatrix::from_diagonal_element(6, 6, Complex64::new(0.0, 0.0)) * u.adjoint()
                + u.column(0) * u.column(0).adjoint(),
        )
        .unwrap();
        let a = random_pure_state(2, 5);
        let b = random_pure_state(3, 6);
        let direct = m.expectation(&tensor(&a, &b)).unwrap();
        assert!((reduce_on_b(m.matrix(), dims, &b).expectation(&a).unwrap() - direct).abs() < 1e-12);
        assert!((reduce_on_a(m.matrix(), dims, &a).expectation(&b).unwrap() - direct).abs() < 1e-12);
    }
}
