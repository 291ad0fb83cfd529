//! Effectiveness of reference sets and the witness family
//! `W_n = h(n)·I − Σ nᵢ|ψᵢ⟩⟨ψᵢ|`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::grid_separable_max;
use crate::quantum::random::{derive_seed, rng};
use crate::quantum::{overlap, DensityOperator, Dims, HermitianOperator, ProductState, PureState};
use crate::subspace::{
    is_ces, partition_reference_set, schmidt_decompose, seesaw_maximize, seesaw_run, span_orthonormal_basis,
    CesCertificate, CesOptions, ReferencePartition, SeesawOptions, Subspace,
};
use crate::tol;

/// Ordered list of product references with shared dims.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RefsRepr")]
pub struct ReferenceSet {
    states: Vec<ProductState>,
    dims: Dims,
    labels: Vec<Option<String>>,
}

#[derive(Deserialize)]
struct RefsRepr {
    states: Vec<ProductState>,
    #[serde(default)]
    labels: Vec<Option<String>>,
}

impl TryFrom<RefsRepr> for ReferenceSet {
    type Error = Error;

    fn try_from(r: RefsRepr) -> Result<Self> {
        let mut s = ReferenceSet::new(r.states)?;
        if !r.labels.is_empty() {
            s = s.with_labels(r.labels)?;
        }
        Ok(s)
    }
}

/// `det G` for the Gram matrix `Gᵢⱼ = ⟨ψᵢ|ψⱼ⟩`.
pub fn gram_determinant(states: &[&PureState]) -> f64 {
    let k = states.len();
    let g = DMatrix::from_fn(k, k, |i, j| states[i].amplitudes().dotc(states[j].amplitudes()));
    HermitianOperator::new(g)
        .expect("Gram matrices are Hermitian")
        .eigensystem()
        .eigenvalues
        .iter()
        .product()
}

impl ReferenceSet {
    /// Validates shared dims and linear independence (`det G > 1e-12`).
    pub fn new(states: Vec<ProductState>) -> Result<Self> {
        let dims = states.first().ok_or(Error::Empty("reference set"))?.dims();
        for s in &states {
            if s.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims.total(),
                    found: s.dims().total(),
                });
            }
        }
        let joint: Vec<&PureState> = states.iter().map(|p| p.state()).collect();
        let det = gram_determinant(&joint);
        if det <= tol::GRAM_DETERMINANT {
            return Err(Error::LinearlyDependent(det));
        }
        let labels = vec![None; states.len()];
        Ok(Self { states, dims, labels })
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Result<Self> {
        if labels.len() != self.states.len() {
            return Err(Error::WrongArity {
                expected: self.states.len(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn states(&self) -> &[ProductState] {
        &self.states
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `M = Σ nᵢ |ψᵢ⟩⟨ψᵢ|`.
    pub fn weighted_sum(&self, n: &[f64]) -> Result<HermitianOperator> {
        if n.len() != self.len() {
            return Err(Error::WrongArity {
                expected: self.len(),
                found: n.len(),
            });
        }
        let joint: Vec<&PureState> = self.states.iter().map(|p| p.state()).collect();
        HermitianOperator::weighted_projectors(&joint, n)
    }

    /// The references with index `skip` removed.
    pub fn without(&self, skip: usize) -> Result<Self> {
        let states = self
            .states
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, s)| s.clone())
            .collect();
        let labels = self
            .labels
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, s)| s.clone())
            .collect();
        Self::new(states)?.with_labels(labels)
    }

    pub fn span(&self) -> Subspace {
        let joint: Vec<PureState> = self.states.iter().map(|p| p.state().clone()).collect();
        span_orthonormal_basis(&joint, self.dims).expect("validated nonempty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupportMethod {
    Seesaw,
    Grid,
    Eigen,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportOptions {
    pub seesaw: SeesawOptions,
    /// Points per Bloch angle for the two-qubit grid.
    pub grid_resolution: usize,
    /// Restarts used when a grid is requested outside two qubits.
    pub fallback_restarts: usize,
    /// Refine the grid maximizer with one local seesaw run.
    pub polish_grid: bool,
}

impl Default for SupportOptions {
    fn default() -> Self {
        Self {
            seesaw: SeesawOptions::default(),
            grid_resolution: 200,
            fallback_restarts: 200,
            polish_grid: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Optimizer {
    Product { state: ProductState },
    Pure { state: PureState },
}

impl Optimizer {
    pub fn state(&self) -> &PureState {
        match self {
            Optimizer::Product { state } => state.state(),
            Optimizer::Pure { state } => state,
        }
    }
}

/// A support-function evaluation `max_x n·x` with its optimizer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportQuery {
    pub direction: Vec<f64>,
    /// Method actually used.
    pub method: SupportMethod,
    pub value: f64,
    pub argmax_state: Optimizer,
    /// A grid was requested but the dims forced a seesaw.
    pub oracle_fallback: bool,
    pub restarts: Option<usize>,
    pub grid_resolution: Option<usize>,
}

/// `λ_max(Σ nᵢ|ψᵢ⟩⟨ψᵢ|)`, the support value over all states.
pub fn global_support(refs: &ReferenceSet, n: &[f64]) -> Result<SupportQuery> {
    let m = refs.weighted_sum(n)?;
    let es = m.eigensystem();
    Ok(SupportQuery {
        direction: n.to_vec(),
        method: SupportMethod::Eigen,
        value: es.lambda_max(),
        argmax_state: Optimizer::Pure {
            state: es.eigenvectors[0].clone(),
        },
        oracle_fallback: false,
        restarts: None,
        grid_resolution: None,
    })
}

/// Max of `⟨a⊗b|M|a⊗b⟩` over product states by seesaw, seeded from the
/// Schmidt vectors of the top eigenvector of `m`.
pub fn separable_max_seesaw(m: &HermitianOperator, dims: Dims, opts: &SeesawOptions) -> (f64, ProductState, usize) {
    let top = m.eigensystem().eigenvectors[0].clone();
    let init = schmidt_decompose(&top, dims).ok().map(|s| s.right_vectors[0].clone());
    let r = seesaw_maximize(m, dims, init, opts, None);
    (r.value, r.maximizer, r.restarts_used)
}

/// Separable maximum of `m` by the requested method, without bookkeeping.
pub fn grid_or_seesaw_max(
    m: &HermitianOperator,
    dims: Dims,
    method: SupportMethod,
    opts: &SupportOptions,
) -> Result<(f64, ProductState)> {
    let r = separable_max(m, dims, method, opts)?;
    Ok((r.value, r.state))
}

struct SeparableMax {
    value: f64,
    state: ProductState,
    method: SupportMethod,
    restarts: Option<usize>,
    fallback: bool,
}

fn separable_max(
    m: &HermitianOperator,
    dims: Dims,
    method: SupportMethod,
    opts: &SupportOptions,
) -> Result<SeparableMax> {
    let seesaw = |restarts: usize, fallback: bool| {
        let o = SeesawOptions {
            restarts,
            ..opts.seesaw
        };
        let (value, state, used) = separable_max_seesaw(m, dims, &o);
        SeparableMax {
            value,
            state,
            method: SupportMethod::Seesaw,
            restarts: Some(used),
            fallback,
        }
    };
    match method {
        SupportMethod::Seesaw | SupportMethod::Eigen => Ok(seesaw(opts.seesaw.restarts, false)),
        SupportMethod::Grid if dims != Dims::qubits() => Ok(seesaw(opts.fallback_restarts, true)),
        SupportMethod::Grid => {
            let (mut value, mut p) = grid_separable_max(m, dims, opts.grid_resolution)?;
            if opts.polish_grid {
                let run = seesaw_run(m, dims, p.b().clone(), &opts.seesaw);
                if run.value > value {
                    value = run.value;
                    p = ProductState::new(run.a, run.b)?;
                }
            }
            Ok(SeparableMax {
                value,
                state: p,
                method: SupportMethod::Grid,
                restarts: None,
                fallback: false,
            })
        }
    }
}

/// Support value of `n` over separable states.
///
/// `Grid` scans Bloch angles exhaustively for two qubits and falls back to a
/// seesaw with `fallback_restarts` elsewhere.
pub fn separable_support(
    refs: &ReferenceSet,
    n: &[f64],
    method: SupportMethod,
    opts: &SupportOptions,
) -> Result<SupportQuery> {
    let m = refs.weighted_sum(n)?;
    let r = separable_max(&m, refs.dims(), method, opts)?;
    Ok(SupportQuery {
        direction: n.to_vec(),
        method: r.method,
        value: r.value,
        argmax_state: Optimizer::Product { state: r.state },
        oracle_fallback: r.fallback,
        restarts: r.restarts,
        grid_resolution: (r.method == SupportMethod::Grid).then_some(opts.grid_resolution),
    })
}

/// `W_n = α·I − Σ nᵢ|ψᵢ⟩⟨ψᵢ|` with `α` the separable support value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub direction: Vec<f64>,
    pub alpha: f64,
    pub operator: HermitianOperator,
    pub lambda_max: f64,
    /// `λ_max − α`.
    pub margin: f64,
    pub method: SupportMethod,
    pub oracle_fallback: bool,
    pub tolerance: f64,
}

impl Witness {
    /// Effective iff `margin > tolerance`.
    pub fn is_effective(&self) -> bool {
        self.margin > self.tolerance
    }
}

pub fn build_witness(refs: &ReferenceSet, n: &[f64], method: SupportMethod, opts: &SupportOptions) -> Result<Witness> {
    let sep = separable_support(refs, n, method, opts)?;
    let glob = global_support(refs, n)?;
    let m = refs.weighted_sum(n)?;
    let dim = m.dim();
    let w = DMatrix::<Complex64>::identity(dim, dim).scale(sep.value) - m.matrix();
    Ok(Witness {
        direction: n.to_vec(),
        alpha: sep.value,
        operator: HermitianOperator::new(w)?,
        lambda_max: glob.value,
        margin: glob.value - sep.value,
        method: sep.method,
        oracle_fallback: sep.oracle_fallback,
        tolerance: tol::WITNESS_MARGIN,
    })
}

/// `Tr(W ρ)`; negative values certify entanglement.
pub fn evaluate_witness(w: &Witness, rho: &DensityOperator) -> Result<f64> {
    w.operator.trace_product(rho.matrix())
}

/// `(⟨ψ₁|ρ|ψ₁⟩, …, ⟨ψ_k|ρ|ψ_k⟩)`.
pub fn fidelity_tuple(rho: &DensityOperator, refs: &ReferenceSet) -> Result<Vec<f64>> {
    if rho.dims() != refs.dims() {
        return Err(Error::DimensionMismatch {
            expected: refs.dims().total(),
            found: rho.dims().total(),
        });
    }
    refs.states()
        .iter()
        .map(|p| rho.expectation(p.state()).map(|x| x.clamp(0.0, 1.0)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    /// References `i` and `j` (0-based) form an effective pair.
    EffectivePair {
        i: usize,
        j: usize,
    },
    ComplementCes,
    OrthogonalPair,
    SharedFactorPair,
    ComplementNotCes,
    /// Single observable: the maximal eigenspace is completely entangled.
    MaxEigenspaceCes,
    MaxEigenspaceNotCes,
}

impl Reason {
    pub fn is_effective(&self) -> bool {
        matches!(
            self,
            Reason::EffectivePair { .. } | Reason::ComplementCes | Reason::MaxEigenspaceCes
        )
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::EffectivePair { i, j } => write!(f, "EffectivePair({},{})", i + 1, j + 1),
            Reason::ComplementCes => f.write_str("ComplementCES"),
            Reason::OrthogonalPair => f.write_str("OrthogonalPair"),
            Reason::SharedFactorPair => f.write_str("SharedFactorPair"),
            Reason::ComplementNotCes => f.write_str("ComplementNotCES"),
            Reason::MaxEigenspaceCes => f.write_str("MaxEigenspaceCES"),
            Reason::MaxEigenspaceNotCes => f.write_str("MaxEigenspaceNotCES"),
        }
    }
}

/// Finite cross-check that no swept direction yields an effective witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionSweep {
    pub directions: usize,
    pub max_margin: f64,
    pub best_direction: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EffectivenessVerdict {
    pub effective: bool,
    pub reason: Reason,
    pub evidence: Option<CesCertificate>,
    pub effective_direction: Option<Vec<f64>>,
    /// Seesaw margin of the witness along `effective_direction`.
    pub witness_margin: Option<f64>,
    /// The numerical evidence is too weak to back the verdict.
    pub inconclusive: bool,
    pub partition: Option<ReferencePartition>,
    pub sweep: Option<DirectionSweep>,
}

impl fmt::Display for EffectivenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = if self.effective { "effective" } else { "not effective" };
        write!(f, "{word} ({})", self.reason)?;
        if self.inconclusive {
            f.write_str(" [inconclusive]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectivenessOptions {
    pub ces: CesOptions,
    pub support: SupportOptions,
    /// Directions swept when the verdict is negative; `0` disables the sweep.
    pub sweep_pairs: usize,
    pub sweep_sets: usize,
}

impl Default for EffectivenessOptions {
    fn default() -> Self {
        Self {
            ces: CesOptions::default(),
            support: SupportOptions::default(),
            sweep_pairs: 72,
            sweep_sets: 500,
        }
    }
}

impl EffectivenessOptions {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.ces.seesaw.seed = seed;
        self.support.seesaw.seed = seed;
        self
    }

    pub fn without_sweep(mut self) -> Self {
        self.sweep_pairs = 0;
        self.sweep_sets = 0;
        self
    }
}

/// Sweep directions: `count` points on the unit circle for `k = 2`, seeded
/// Gaussian unit vectors otherwise.
pub fn sweep_directions(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    if k == 2 {
        return (0..count)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
    }
    let mut r = rng(derive_seed(seed, 0x5EE9));
    (0..count)
        .map(|_| loop {
            let v: Vec<f64> = (0..k).map(|_| r.sample(StandardNormal)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                break v.into_iter().map(|x| x / norm).collect();
            }
        })
        .collect()
}

/// Largest seesaw witness margin over `directions`.
pub fn direction_sweep(refs: &ReferenceSet, directions: &[Vec<f64>], opts: &SupportOptions) -> Result<DirectionSweep> {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for n in directions {
        let w = build_witness(refs, n, SupportMethod::Seesaw, opts)?;
        if w.margin > best.0 {
            best = (w.margin, n.clone());
        }
    }
    Ok(DirectionSweep {
        directions: directions.len(),
        max_margin: best.0,
        best_direction: best.1,
        seed: opts.seesaw.seed,
    })
}

fn verified_margin(refs: &ReferenceSet, n: &[f64], opts: &SupportOptions) -> Result<f64> {
    Ok(build_witness(refs, n, SupportMethod::Seesaw, opts)?.margin)
}

fn negative_sweep(refs: &ReferenceSet, opts: &EffectivenessOptions) -> Result<Option<DirectionSweep>> {
    let count = if refs.len() == 2 {
        opts.sweep_pairs
    } else {
        opts.sweep_sets
    };
    if count == 0 {
        return Ok(None);
    }
    let dirs = sweep_directions(refs.len(), count, opts.support.seesaw.seed);
    direction_sweep(refs, &dirs, &opts.support).map(Some)
}

/// Effectiveness of a single observable: its maximal eigenspace must be
/// completely entangled.
pub fn single_observable_effective(
    a: &HermitianOperator,
    dims: Dims,
    opts: &EffectivenessOptions,
) -> Result<EffectivenessVerdict> {
    if a.dim() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: a.dim(),
        });
    }
    let es = a.eigensystem();
    let emax = span_orthonormal_basis(es.max_eigenspace(), dims)?;
    let cert = is_ces(&emax, &opts.ces);
    let (alpha, _, _) = separable_max_seesaw(a, dims, &opts.support.seesaw);
    let margin = es.lambda_max() - alpha;
    let effective = cert.is_ces;
    Ok(EffectivenessVerdict {
        effective,
        reason: if effective {
            Reason::MaxEigenspaceCes
        } else {
            Reason::MaxEigenspaceNotCes
        },
        inconclusive: cert.borderline || (effective && margin <= tol::WITNESS_MARGIN),
        evidence: Some(cert),
        effective_direction: effective.then(|| vec![1.0]),
        witness_margin: Some(margin),
        partition: None,
        sweep: None,
    })
}

/// Pair criterion: effective iff both local overlaps lie strictly in `(0, 1)`.
pub fn pair_effective(
    p1: &ProductState,
    p2: &ProductState,
    opts: &EffectivenessOptions,
) -> Result<EffectivenessVerdict> {
    let refs = ReferenceSet::new(vec![p1.clone(), p2.clone()])?;
    pair_verdict(&refs, 0, 1, opts, true)
}

fn pair_reason(p1: &ProductState, p2: &ProductState) -> Result<Option<Reason>> {
    let (la, lb) = p1.local_overlaps(p2)?;
    let lt = tol::LOCAL_OVERLAP;
    Ok(if la < lt || lb < lt {
        Some(Reason::OrthogonalPair)
    } else if la > 1.0 - lt || lb > 1.0 - lt {
        Some(Reason::SharedFactorPair)
    } else {
        None
    })
}

fn pair_verdict(
    refs: &ReferenceSet,
    i: usize,
    j: usize,
    opts: &EffectivenessOptions,
    sweep: bool,
) -> Result<EffectivenessVerdict> {
    let s = refs.states();
    match pair_reason(&s[i], &s[j])? {
        None => {
            let mut n = vec![0.0; refs.len()];
            n[i] = 1.0;
            n[j] = 1.0;
            let margin = verified_margin(refs, &n, &opts.support)?;
            Ok(EffectivenessVerdict {
                effective: true,
                reason: Reason::EffectivePair { i, j },
                evidence: None,
                effective_direction: Some(n),
                witness_margin: Some(margin),
                inconclusive: margin <= tol::WITNESS_MARGIN,
                partition: None,
                sweep: None,
            })
        }
        Some(reason) => Ok(EffectivenessVerdict {
            effective: false,
            reason,
            evidence: None,
            effective_direction: None,
            witness_margin: None,
            inconclusive: false,
            partition: None,
            sweep: if sweep { negative_sweep(refs, opts)? } else { None },
        }),
    }
}

/// Set criterion: some pair is effective, or the complement of the span is
/// completely entangled.
pub fn set_effective(refs: &ReferenceSet, opts: &EffectivenessOptions) -> Result<EffectivenessVerdict> {
    let partition = partition_reference_set(refs.states(), tol::LOCAL_OVERLAP);
    if refs.len() == 2 {
        let mut v = pair_verdict(refs, 0, 1, opts, true)?;
        v.partition = Some(partition);
        return Ok(v);
    }
    let s = refs.states();
    for i in 0..refs.len() {
        for j in i + 1..refs.len() {
            if pair_reason(&s[i], &s[j])?.is_none() {
                let mut v = pair_verdict(refs, i, j, opts, false)?;
                v.partition = Some(partition);
                return Ok(v);
            }
        }
    }
    let complement = refs.span().orthogonal_complement();
    let cert = is_ces(&complement, &opts.ces);
    if cert.is_ces {
        let n = vec![-1.0; refs.len()];
        let margin = verified_margin(refs, &n, &opts.support)?;
        Ok(EffectivenessVerdict {
            effective: true,
            reason: Reason::ComplementCes,
            inconclusive: cert.borderline || margin <= tol::WITNESS_MARGIN,
            evidence: Some(cert),
            effective_direction: Some(n),
            witness_margin: Some(margin),
            partition: Some(partition),
            sweep: None,
        })
    } else {
        Ok(EffectivenessVerdict {
            effective: false,
            reason: Reason::ComplementNotCes,
            evidence: Some(cert),
            effective_direction: None,
            witness_margin: None,
            inconclusive: false,
            partition: Some(partition),
            sweep: negative_sweep(refs, opts)?,
        })
    }
}

/// All pairwise verdicts `(i, j, verdict)` without sweeps.
pub fn all_pair_verdicts(
    refs: &ReferenceSet,
    opts: &EffectivenessOptions,
) -> Result<Vec<(usize, usize, EffectivenessVerdict)>> {
    let mut out = Vec::new();
    for i in 0..refs.len() {
        for j in i + 1..refs.len() {
            let sub = ReferenceSet::new(vec![refs.states()[i].clone(), refs.states()[j].clone()])?;
            out.push((i, j, pair_verdict(&sub, 0, 1, opts, false)?));
        }
    }
    Ok(out)
}

/// `|⟨ψᵢ|ψⱼ⟩|` for all pairs, for reports.
pub fn overlap_matrix(refs: &ReferenceSet) -> Vec<Vec<f64>> {
    let s = refs.states();
    s.iter()
        .map(|x| {
            s.iter()
                .map(|y| overlap(x.state(), y.state()).map(|z| z.norm()).unwrap_or(0.0))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quantum::random::{random_product_state, rng};
    use crate::quantum::{normalize, tensor};
    use proptest::prelude::*;

    const ALPHA_EX1: f64 = 0.75 + std::f64::consts::FRAC_1_SQRT_2;

    fn ex1() -> ReferenceSet {
        ReferenceSet::new(fixtures::example1_pair()).unwrap()
    }

    fn tiles() -> ReferenceSet {
        ReferenceSet::new(fixtures::tiles_upb()).unwrap()
    }

    fn quick() -> EffectivenessOptions {
        EffectivenessOptions::default().without_sweep()
    }

    /// Independent closed form for the pair: with local fidelity 1/2 on each
    /// side, `max (u_A u_B + v_A v_B)` over the local disks, scanned on a
    /// fine one-parameter grid of the shared Bloch angle.
    fn ex1_alpha_by_disks() -> f64 {
        let mut best: f64 = 0.0;
        let n = 200_000;
        for i in 0..=n {
            let t = std::f64::consts::PI * i as f64 / n as f64;
            // |a⟩ = cos(t/2)|0⟩ + sin(t/2)|1⟩: u = cos²(t/2), v = |⟨+|a⟩|².
            let u = (t / 2.0).cos().powi(2);
            let v = 0.5 * (1.0 + t.sin());
            best = best.max(u * u + v * v);
        }
        best
    }

    #[test]
    fn reference_set_rejects_dependence() {
        let zz = ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]);
        let err = ReferenceSet::new(vec![zz.clone(), zz.clone()]).unwrap_err();
        assert!(matches!(err, Error::LinearlyDependent(_)));
        let q = ProductState::from_real(&[1.0, 0.0, 0.0], &[1.0, 0.0]);
        assert!(matches!(
            ReferenceSet::new(vec![zz, q]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(ReferenceSet::new(vec![]).is_err());
    }

    #[test]
    fn global_support_examples() {
        let r = ex1();
        assert!((global_support(&r, &[1.0, 1.0]).unwrap().value - 1.5).abs() < 1e-12);
        assert!((global_support(&r, &[1.0, 0.0]).unwrap().value - 1.0).abs() < 1e-12);
        assert!(global_support(&r, &[0.0, 0.0]).unwrap().value.abs() < 1e-12);
        assert!(global_support(&r, &[1.0]).is_err());
    }

    #[test]
    fn separable_support_examples() {
        let oracle = ex1_alpha_by_disks();
        assert!((oracle - ALPHA_EX1).abs() < 1e-9);
        let r = ex1();
        let s = separable_support(&r, &[1.0, 1.0], SupportMethod::Seesaw, &SupportOptions::default()).unwrap();
        assert!((s.value - ALPHA_EX1).abs() < 1e-9);
        let s = separable_support(&r, &[1.0, 0.0], SupportMethod::Seesaw, &SupportOptions::default()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!((s.argmax_state.state().amplitudes()[0].norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn grid_support_falls_back_outside_qubits() {
        let opts = SupportOptions {
            fallback_restarts: 20,
            ..SupportOptions::default()
        };
        let s = separable_support(&tiles(), &[-1.0; 5], SupportMethod::Grid, &opts).unwrap();
        assert!(s.oracle_fallback);
        assert_eq!(s.method, SupportMethod::Seesaw);
        assert_eq!(s.restarts, Some(20));
    }

    #[test]
    fn witness_examples() {
        let r = ex1();
        let opts = SupportOptions::default();
        let w = build_witness(&r, &[1.0, 1.0], SupportMethod::Seesaw, &opts).unwrap();
        assert!((w.margin - (1.5 - ALPHA_EX1)).abs() < 1e-9);
        assert!(w.is_effective());

        let phi = normalize(
            &(0..4)
                .map(|i| {
                    tensor(&PureState::basis(2, 0), &PureState::basis(2, 0)).amplitudes()[i]
                        + tensor(&PureState::plus(), &PureState::plus()).amplitudes()[i]
                })
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let rho = DensityOperator::pure(&phi, Dims::qubits()).unwrap();
        assert!((evaluate_witness(&w, &rho).unwrap() + w.margin).abs() < 1e-9);
        let sigma = DensityOperator::pure(&PureState::basis(4, 0), Dims::qubits()).unwrap();
        assert!(evaluate_witness(&w, &sigma).unwrap() >= -1e-12);

        let w = build_witness(&r, &[1.0, 0.0], SupportMethod::Seesaw, &opts).unwrap();
        assert!(w.margin.abs() < 1e-9);
        assert!(!w.is_effective());
    }

    #[test]
    fn tiles_witness() {
        let r = tiles();
        let w = build_witness(&r, &[-1.0; 5], SupportMethod::Seesaw, &SupportOptions::default()).unwrap();
        assert!(w.lambda_max.abs() < 1e-9);
        assert!(w.alpha < -1e-3, "alpha {}", w.alpha);
        let k = r.span().orthogonal_complement();
        let rho = DensityOperator::normalized_projector(k.basis(), Dims::qutrits()).unwrap();
        for x in fidelity_tuple(&rho, &r).unwrap() {
            assert!(x.abs() < 1e-10);
        }
        assert!((evaluate_witness(&w, &rho).unwrap() - w.alpha).abs() < 1e-9);
    }

    #[test]
    fn fidelity_tuple_examples() {
        let r = ex1();
        let rho = DensityOperator::pure(&PureState::basis(4, 0), Dims::qubits()).unwrap();
        let t = fidelity_tuple(&rho, &r).unwrap();
        assert!((t[0] - 1.0).abs() < 1e-12 && (t[1] - 0.25).abs() < 1e-12);
        let t = fidelity_tuple(&DensityOperator::maximally_mixed(Dims::qubits()), &r).unwrap();
        assert!((t[0] - 0.25).abs() < 1e-12 && (t[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn single_observable_examples() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let a = HermitianOperator::new(bell.projector()).unwrap();
        let v = single_observable_effective(&a, Dims::qubits(), &quick()).unwrap();
        assert!(v.effective);
        assert!((v.evidence.as_ref().unwrap().max_product_overlap - 0.5).abs() < 1e-9);
        assert!((v.witness_margin.unwrap() - 0.5).abs() < 1e-9);

        let a = HermitianOperator::new(PureState::basis(4, 0).projector()).unwrap();
        assert!(
            !single_observable_effective(&a, Dims::qubits(), &quick())
                .unwrap()
                .effective
        );

        let m = tiles().weighted_sum(&[-1.0; 5]).unwrap();
        let v = single_observable_effective(&m, Dims::qutrits(), &quick()).unwrap();
        assert!(v.effective);
        assert_eq!(v.evidence.unwrap().subspace_dim, 4);
    }

    #[test]
    fn pair_table() {
        let o = EffectivenessOptions::default();
        let [a, b] = <[ProductState; 2]>::try_from(fixtures::example1_pair()).unwrap();
        let v = pair_effective(&a, &b, &o).unwrap();
        assert!(v.effective && !v.inconclusive);
        assert_eq!(v.effective_direction, Some(vec![1.0, 1.0]));

        let [a, b] = <[ProductState; 2]>::try_from(fixtures::orthogonal_pair()).unwrap();
        let v = pair_effective(&a, &b, &o).unwrap();
        assert_eq!(v.reason, Reason::OrthogonalPair);
        let sweep = v.sweep.unwrap();
        assert_eq!(sweep.directions, 72);
        assert!(sweep.max_margin <= 1e-6);

        let [a, b] = <[ProductState; 2]>::try_from(fixtures::shared_factor_pair()).unwrap();
        let v = pair_effective(&a, &b, &o).unwrap();
        assert_eq!(v.reason, Reason::SharedFactorPair);
        assert!(v.sweep.unwrap().max_margin <= 1e-6);
    }

    #[test]
    fn effective_pairs_sweep_finds_margin() {
        let v = set_effective(&ex1(), &EffectivenessOptions::default()).unwrap();
        assert_eq!(v.reason, Reason::EffectivePair { i: 0, j: 1 });
        assert_eq!(v.reason.to_string(), "EffectivePair(1,2)");
        let s = direction_sweep(&ex1(), &sweep_directions(2, 72, 0), &SupportOptions::default()).unwrap();
        assert!(s.max_margin > 1e-6);
    }

    #[test]
    fn set_examples() {
        let v = set_effective(&tiles(), &quick()).unwrap();
        assert!(v.effective);
        assert_eq!(v.reason, Reason::ComplementCes);
        assert_eq!(v.effective_direction, Some(vec![-1.0; 5]));
        assert!(v.witness_margin.unwrap() > 1e-3);

        for skip in 0..5 {
            let sub = tiles().without(skip).unwrap();
            let v = set_effective(&sub, &quick()).unwrap();
            assert!(!v.effective);
            assert_eq!(v.reason, Reason::ComplementNotCes);
            let cert = v.evidence.unwrap();
            assert_eq!(cert.subspace_dim, 5);
            assert_eq!(cert.decided_by, crate::subspace::CesDecision::DimensionBound);
        }

        let refs = ReferenceSet::new(vec![
            ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]),
            ProductState::from_real(&[1.0, 1.0], &[1.0, 1.0]),
            ProductState::from_real(&[0.0, 1.0], &[0.0, 1.0]),
        ])
        .unwrap();
        let v = set_effective(&refs, &quick()).unwrap();
        assert_eq!(v.reason, Reason::EffectivePair { i: 0, j: 1 });
        assert_eq!(v.effective_direction, Some(vec![1.0, 1.0, 0.0]));
    }

    #[test]
    fn single_reference_is_never_effective() {
        let refs = ReferenceSet::new(vec![ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0])]).unwrap();
        let v = set_effective(&refs, &quick()).unwrap();
        assert_eq!(v.reason, Reason::ComplementNotCes);
    }

    #[test]
    fn support_dominance_and_soundness() {
        let r = ex1();
        let opts = SupportOptions::default();
        let mut g = rng(11);
        for d in sweep_directions(2, 24, 0) {
            let w = build_witness(&r, &d, SupportMethod::Seesaw, &opts).unwrap();
            assert!(w.alpha <= w.lambda_max + 1e-9);
            for s in 0..50u64 {
                let p = random_product_state(Dims::qubits(), g.random::<u64>() ^ s);
                let rho = DensityOperator::pure(p.state(), Dims::qubits()).unwrap();
                assert!(evaluate_witness(&w, &rho).unwrap() >= -1e-7);
            }
        }
    }

    #[test]
    fn verdict_json_round_trip() {
        let v = set_effective(&ex1(), &quick()).unwrap();
        let js = serde_json::to_string(&v).unwrap();
        let back: EffectivenessVerdict = serde_json::from_str(&js).unwrap();
        assert_eq!(back.reason, v.reason);
        let w = build_witness(&ex1(), &[1.0, 1.0], SupportMethod::Seesaw, &SupportOptions::default()).unwrap();
        let back: Witness = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(back.operator, w.operator);
        assert_eq!(back.alpha, w.alpha);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn support_is_positively_homogeneous(theta in 0.0..std::f64::consts::TAU, t in 0.1f64..10.0) {
            let r = ex1();
            let n = [theta.cos(), theta.sin()];
            let tn = [t * n[0], t * n[1]];
            let opts = SupportOptions::default();
            let a = separable_support(&r, &n, SupportMethod::Seesaw, &opts).unwrap();
            let b = separable_support(&r, &tn, SupportMethod::Seesaw, &opts).unwrap();
            prop_assert!((b.value - t * a.value).abs() < 1e-9 * t.max(1.0));
            let m = r.weighted_sum(&n).unwrap();
            let at_b = m.expectation(b.argmax_state.state()).unwrap();
            prop_assert!((at_b - a.value).abs() < 1e-9);
        }
    }
}
