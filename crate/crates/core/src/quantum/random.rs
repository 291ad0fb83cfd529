//! Seeded Haar sampling of states and unitaries.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::state::{Dims, ProductState, PureState};

/// Mixes a base seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state drawn from an explicit generator.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    loop {
        let v = DVector::from_fn(dim, |_, _| complex_gaussian(rng));
        if let Ok(s) = PureState::from_vector(v) {
            return s;
        }
    }
}

/// Haar-random pure state; deterministic in `seed`.
pub fn random_pure_state(dim: usize, seed: u64) -> PureState {
    haar_state(dim, &mut rng(seed))
}

/// Haar-random product state `|a⟩⊗|b⟩`.
pub fn random_product_state(dims: Dims, seed: u64) -> ProductState {
    let mut r = rng(seed);
    let a = haar_state(dims.d_a, &mut r);
    let b = haar_state(dims.d_b, &mut r);
    ProductState::new(a, b).expect("dims validated")
}

/// `n×n` matrix of iid standard complex Gaussians (Ginibre ensemble).
pub fn random_matrix(n: usize, seed: u64) -> DMatrix<Complex64> {
    let mut r = rng(seed);
    DMatrix::from_fn(n, n, |_, _| complex_gaussian(&mut r))
}

/// Orthonormalizes the columns of a Ginibre matrix by modified Gram-Schmidt.
/// The implied `R` factor has a positive real diagonal, which makes `Q` Haar
/// distributed.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    loop {
        let mut q = DMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
        let mut ok = true;
        for j in 0..n {
            for _ in 0..2 {
                for i in 0..j {
                    let proj = q.column(i).dotc(&q.column(j));
                    let qi = q.column(i).into_owned();
                    let mut cj = q.column_mut(j);
                    cj -= qi * proj;
                }
            }
            let norm = q.column(j).norm();
            if norm < 1e-12 {
                ok = false;
                break;
            }
            q.column_mut(j).unscale_mut(norm);
        }
        if ok {
            return q;
        }
    }
}

pub fn random_unitary(n: usize, seed: u64) -> DMatrix<Complex64> {
    haar_unitary(n, &mut rng(seed))
}

/// Independent Haar unitaries `(U_A, U_B)` for the two factors.
pub fn random_local_unitary(dims: Dims, seed: u64) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let mut r = rng(seed);
    let ua = haar_unitary(dims.d_a, &mut r);
    let ub = haar_unitary(dims.d_b, &mut r);
    (ua, ub)
}

/// Applies `U_A ⊗ U_B` factor-wise.
pub fn apply_local(p: &ProductState, ua: &DMatrix<Complex64>, ub: &DMatrix<Complex64>) -> ProductState {
    let a = PureState::from_vector(ua * p.a().amplitudes()).expect("unitary preserves norm");
    let b = PureState::from_vector(ub * p.b().amplitudes()).expect("unitary preserves norm");
    ProductState::new(a, b).expect("dims preserved")
}

pub fn apply_unitary(psi: &PureState, u: &DMatrix<Complex64>) -> PureState {
    PureState::from_vector(u * psi.amplitudes()).expect("unitary preserves norm")
}

/// Kronecker product `A ⊗ B` in row-major composite ordering.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Dirichlet(1,…,1) weights: normalized iid exponentials.
pub fn dirichlet_uniform<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}
