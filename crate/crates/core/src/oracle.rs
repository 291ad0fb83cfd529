//! Independent checks used to validate the analytic modules: partial
//! transposition, exhaustive two-qubit grids and a local-unitary harness.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::effectiveness::ReferenceSet;
use crate::error::{Error, Result};
use crate::quantum::random::{apply_local, apply_unitary, derive_seed, random_local_unitary, random_unitary};
use crate::quantum::{DensityOperator, Dims, HermitianOperator, ProductState, PureState, Subsystem};
use crate::range::{hausdorff_distance, sampled_region_states, ConvexRegion2D, RangeMode, SampleOptions};
use crate::subspace::{is_ces, span_orthonormal_basis, CesCertificate, CesOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    /// Smallest eigenvalue of the partial transpose over `B`.
    pub min_eigenvalue: f64,
    pub is_npt: bool,
    pub dims: Dims,
    pub tolerance: f64,
}

pub fn ppt_check(rho: &DensityOperator, tol: f64) -> PptReport {
    let min_eigenvalue = rho.partial_transpose(Subsystem::B).eigensystem().lambda_min();
    PptReport {
        min_eigenvalue,
        is_npt: min_eigenvalue < -tol,
        dims: rho.dims(),
        tolerance: tol,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OracleVerdict {
    Entangled {
        reason: EntanglementReason,
    },
    /// PPT in a system where PPT is equivalent to separability.
    Separable,
    Unknown,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntanglementReason {
    Npt {
        min_eigenvalue: f64,
    },
    /// The support lies in a certified completely entangled subspace.
    CesSupport {
        certificate: Box<CesCertificate>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdict: OracleVerdict,
    pub ppt: PptReport,
    pub support_dim: usize,
}

/// PPT test, then CES-support test, then the low-dimension PPT equivalence.
pub fn entanglement_oracle(rho: &DensityOperator, ces: &CesOptions) -> OracleReport {
    let ppt = ppt_check(rho, crate::tol::DENSITY_POSITIVITY);
    let support = rho.support();
    let support_dim = support.len();
    let verdict = if ppt.is_npt {
        OracleVerdict::Entangled {
            reason: EntanglementReason::Npt {
                min_eigenvalue: ppt.min_eigenvalue,
            },
        }
    } else {
        let cert = span_orthonormal_basis(&support, rho.dims())
            .ok()
            .map(|s| is_ces(&s, ces))
            .filter(|c| c.is_ces);
        let d = rho.dims();
        let low_dim = d.total() <= 6;
        match cert {
            Some(c) => OracleVerdict::Entangled {
                reason: EntanglementReason::CesSupport {
                    certificate: Box::new(c),
                },
            },
            None if low_dim => OracleVerdict::Separable,
            None => OracleVerdict::Unknown,
        }
    };
    OracleReport {
        verdict,
        ppt,
        support_dim,
    }
}

/// Exhaustive scan of `⟨a⊗b|M|a⊗b⟩` over Bloch angles for two qubits:
/// `θ ∈ [0, π]` with endpoints, `φ ∈ [0, 2π)`, `resolution` points each.
///
/// Ties keep the lexicographically first grid index `(θ_A, φ_A, θ_B, φ_B)`.
pub fn grid_separable_max(m: &HermitianOperator, dims: Dims, resolution: usize) -> Result<(f64, ProductState)> {
    if dims != Dims::qubits() {
        return Err(Error::UnsupportedDims {
            d_a: dims.d_a,
            d_b: dims.d_b,
        });
    }
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        });
    }
    let n = resolution.max(2);
    let thetas: Vec<f64> = (0..n).map(|i| PI * i as f64 / (n - 1) as f64).collect();
    let phis: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
    // Bloch vectors of the b grid, flattened (θ major).
    let mut bloch = Vec::with_capacity(n * n);
    for &t in &thetas {
        let (st, ct) = t.sin_cos();
        for &p in &phis {
            let (sp, cp) = p.sin_cos();
            bloch.push([st * cp, st * sp, ct]);
        }
    }
    let mm = m.matrix();
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    for (ia, &ta) in thetas.iter().enumerate() {
        for (ja, &pa) in phis.iter().enumerate() {
            let a = PureState::bloch(ta, pa);
            let av = a.amplitudes();
            // K = (⟨a|⊗I) M (|a⟩⊗I) as a 2×2 block.
            let mut k = [[num_complex::Complex64::new(0.0, 0.0); 2]; 2];
            for (r, row) in k.iter_mut().enumerate() {
                for (c, entry) in row.iter_mut().enumerate() {
                    for i in 0..2 {
                        for j in 0..2 {
                            *entry += av[i].conj() * mm[(2 * i + r, 2 * j + c)] * av[j];
                        }
                    }
                }
            }
            let (p, s, q) = (k[0][0].re, k[1][1].re, k[0][1]);
            let k0 = 0.5 * (p + s);
            let kv = [q.re, -q.im, 0.5 * (p - s)];
            let mut local = (f64::NEG_INFINITY, 0usize);
            for (ib, r) in bloch.iter().enumerate() {
                let v = kv[0] * r[0] + kv[1] * r[1] + kv[2] * r[2];
                if v > local.0 {
                    local = (v, ib);
                }
            }
            let v = k0 + local.0;
            if v > best.0 {
                best = (v, ia * n + ja, local.1);
            }
        }
    }
    let (value, ai, bi) = best;
    let a = PureState::bloch(thetas[ai / n], phis[ai % n]);
    let b = PureState::bloch(thetas[bi / n], phis[bi % n]);
    Ok((value, ProductState::new(a, b)?))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub trials: usize,
    pub distances: Vec<f64>,
    pub max_hausdorff: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

fn jsnr_of(states: &[PureState], dims: Dims, opts: &SampleOptions) -> Result<ConvexRegion2D> {
    Ok(sampled_region_states(states, dims, RangeMode::Jsnr, opts)?.region)
}

fn report(distances: Vec<f64>, tol: f64, seed: u64) -> InvarianceReport {
    let max_hausdorff = distances.iter().copied().fold(0.0, f64::max);
    InvarianceReport {
        trials: distances.len(),
        pass: max_hausdorff < tol,
        max_hausdorff,
        distances,
        tolerance: tol,
        seed,
    }
}

/// Rebuilds the sampled separable range after `trials` seeded local unitaries
/// and records the Hausdorff drift from the original.
pub fn lu_invariance_harness(
    refs: &ReferenceSet,
    trials: usize,
    seed: u64,
    tol: f64,
    opts: &SampleOptions,
) -> Result<InvarianceReport> {
    let dims = refs.dims();
    let joint: Vec<PureState> = refs.states().iter().map(|p| p.state().clone()).collect();
    let base = jsnr_of(&joint, dims, opts)?;
    let mut distances = Vec::with_capacity(trials);
    for t in 0..trials {
        let (ua, ub) = random_local_unitary(dims, derive_seed(seed, t as u64));
        let moved: Vec<PureState> = refs
            .states()
            .iter()
            .map(|p| apply_local(p, &ua, &ub).state().clone())
            .collect();
        distances.push(hausdorff_distance(&base, &jsnr_of(&moved, dims, opts)?));
    }
    Ok(report(distances, tol, seed))
}

/// Same harness with global Haar unitaries, which generally entangle the
/// references; `pass` is expected to be false for some seed.
pub fn global_unitary_control(
    refs: &ReferenceSet,
    trials: usize,
    seed: u64,
    tol: f64,
    opts: &SampleOptions,
) -> Result<InvarianceReport> {
    let dims = refs.dims();
    let joint: Vec<PureState> = refs.states().iter().map(|p| p.state().clone()).collect();
    let base = jsnr_of(&joint, dims, opts)?;
    let mut distances = Vec::with_capacity(trials);
    for t in 0..trials {
        let u = random_unitary(dims.total(), derive_seed(seed ^ 0xC0_47_20_1A, t as u64));
        let moved: Vec<PureState> = joint.iter().map(|s| apply_unitary(s, &u)).collect();
        distances.push(hausdorff_distance(&base, &jsnr_of(&moved, dims, opts)?));
    }
    Ok(report(distances, tol, seed))
}
