//! Ranges reconstructed from support-function sweeps.
//!
//! Each direction `n` contributes an attained tuple (inner bound) and a
//! supporting halfplane `n·x ≤ h(n)` (outer bound).

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::geometry::{
    clip_halfplane, hausdorff_distance, hull_with, ConvexRegion2D, Point, Provenance, RegionParameters,
};
use crate::effectiveness::{grid_or_seesaw_max, ReferenceSet, SupportMethod, SupportOptions};
use crate::error::{Error, Result};
use crate::quantum::{Dims, HermitianOperator, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeMode {
    Jnr,
    Jsnr,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub directions: usize,
    /// Separable maximizer for JSNR sweeps (`seesaw` or `grid`).
    pub method: SupportMethod,
    pub support: SupportOptions,
}

impl Default for SampleOptions {
    fn default() -> Self {
        let mut support = SupportOptions::default();
        support.seesaw.restarts = 20;
        Self {
            directions: 360,
            method: SupportMethod::Seesaw,
            support,
        }
    }
}

/// Direction, support value and the tuple attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportSample {
    pub direction: Point,
    pub value: f64,
    pub tuple: Point,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampledRegion {
    /// Hull of attained tuples.
    pub region: ConvexRegion2D,
    /// `[0,1]²` cut by every supporting halfplane.
    pub outer: ConvexRegion2D,
    /// Hausdorff distance between the two bounds.
    pub gap: f64,
    pub samples: Vec<SupportSample>,
}

impl SampledRegion {
    pub fn support_at(&self, direction: Point) -> Option<f64> {
        self.samples
            .iter()
            .find(|s| (s.direction[0] - direction[0]).abs() < 1e-12 && (s.direction[1] - direction[1]).abs() < 1e-12)
            .map(|s| s.value)
    }
}

/// Sweeps `directions` unit vectors `(cos t, sin t)`, `t = 2πi/directions`.
pub fn sampled_region(refs: &ReferenceSet, mode: RangeMode, opts: &SampleOptions) -> Result<SampledRegion> {
    if refs.len() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: refs.len(),
        });
    }
    let joint: Vec<PureState> = refs.states().iter().map(|p| p.state().clone()).collect();
    sampled_region_states(&joint, refs.dims(), mode, opts)
}

/// Like [`sampled_region`] for arbitrary (possibly entangled) references.
pub fn sampled_region_states(
    states: &[PureState],
    dims: Dims,
    mode: RangeMode,
    opts: &SampleOptions,
) -> Result<SampledRegion> {
    if states.len() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: states.len(),
        });
    }
    let p1 = HermitianOperator::new(states[0].projector())?;
    let p2 = HermitianOperator::new(states[1].projector())?;
    let count = opts.directions.max(8);
    let mut samples = Vec::with_capacity(count);
    for i in 0..count {
        let t = TAU * i as f64 / count as f64;
        let n = [t.cos(), t.sin()];
        let m = HermitianOperator::new(p1.matrix().scale(n[0]) + p2.matrix().scale(n[1]))?;
        let (value, phi) = match mode {
            RangeMode::Jnr => {
                let es = m.eigensystem();
                (es.lambda_max(), es.eigenvectors[0].clone())
            }
            RangeMode::Jsnr => {
                let (v, p) = grid_or_seesaw_max(&m, dims, opts.method, &opts.support)?;
                (v, p.state().clone())
            }
        };
        let tuple = [p1.expectation(&phi)?, p2.expectation(&phi)?];
        samples.push(SupportSample {
            direction: n,
            value,
            tuple,
        });
    }
    let (inner_prov, outer_params) = match mode {
        RangeMode::Jnr => (Provenance::SampledJnr, count),
        RangeMode::Jsnr => (Provenance::SampledJsnr, count),
    };
    let params = RegionParameters {
        directions: Some(outer_params),
        ..Default::default()
    };
    let tuples: Vec<Point> = samples.iter().map(|s| s.tuple).collect();
    let region = hull_with(&tuples, inner_prov, params.clone());
    let mut poly = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    for s in &samples {
        poly = clip_halfplane(&poly, s.direction, s.value);
    }
    let outer = hull_with(&poly, Provenance::SupportOuter, params);
    let gap = hausdorff_distance(&region, &outer);
    Ok(SampledRegion {
        region,
        outer,
        gap,
        samples,
    })
}
