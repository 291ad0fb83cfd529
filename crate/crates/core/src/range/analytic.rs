//! Closed-form ranges of two pure states and of two product states.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::geometry::{hull_with, ConvexRegion2D, Point, Provenance, RegionParameters};
use crate::error::{Error, Result};
use crate::quantum::{fidelity, ProductState, PureState};

/// `E_γ = {x ∈ [0,1]² : (x₁ + x₂ − (1 − γ))² ≤ 4γ x₁x₂}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseRegion {
    pub gamma: f64,
}

impl EllipseRegion {
    pub fn new(gamma: f64) -> Self {
        Self {
            gamma: gamma.clamp(0.0, 1.0),
        }
    }

    /// `(x₁ + x₂ − (1 − γ))² − 4γ x₁x₂`; zero on the boundary conic.
    pub fn residual(&self, x: Point) -> f64 {
        let g = self.gamma;
        (x[0] + x[1] - (1.0 - g)).powi(2) - 4.0 * g * x[0] * x[1]
    }

    /// Point of `E_γ` at angle `θ ∈ [0, π/2]` and `s = cos φ ∈ [−1, 1]`.
    pub fn point(&self, theta: f64, s: f64) -> Point {
        let g = self.gamma;
        let x1 = theta.cos().powi(2);
        let x2 = g * x1 + (1.0 - g) * (1.0 - x1) + 2.0 * (g * (1.0 - g) * x1 * (1.0 - x1)).sqrt() * s;
        [x1, x2.clamp(0.0, 1.0)]
    }

    /// `θ` grid with the tangency and intercept angles spliced in.
    pub(crate) fn theta_grid(&self, samples: usize) -> Vec<f64> {
        let n = samples.max(2);
        let mut t: Vec<f64> = (0..n).map(|i| FRAC_PI_2 * i as f64 / (n - 1) as f64).collect();
        t.push(self.gamma.sqrt().acos());
        t.push((1.0 - self.gamma).sqrt().acos());
        t.sort_by(f64::total_cmp);
        t.dedup();
        t
    }
}

pub fn ellipse_contains(e: &EllipseRegion, x: Point, tol: f64) -> bool {
    let in_box = x.iter().all(|&v| (-tol..=1.0 + tol).contains(&v));
    in_box && e.residual(x) <= tol
}

/// Boundary points at `cos φ = ±1` over a `θ` grid on `[0, π/2]`: `samples`
/// angles per branch plus the tangency and intercept angles.
pub fn ellipse_boundary(e: &EllipseRegion, samples: usize) -> Vec<Point> {
    let thetas = e.theta_grid(samples);
    let mut out = Vec::with_capacity(2 * thetas.len());
    for s in [1.0, -1.0] {
        out.extend(thetas.iter().map(|&t| e.point(t, s)));
    }
    out
}

/// Boundary and interior samples of `E_γ` on a `θ × cos φ` grid.
pub fn ellipse_samples(e: &EllipseRegion, theta_samples: usize, cos_phi_samples: usize) -> Vec<Point> {
    let thetas = e.theta_grid(theta_samples);
    let m = cos_phi_samples.max(2);
    let mut out = Vec::with_capacity(thetas.len() * m);
    for j in 0..m {
        let s = -1.0 + 2.0 * j as f64 / (m - 1) as f64;
        out.extend(thetas.iter().map(|&t| e.point(t, s)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JnrOptions {
    /// `θ` samples per boundary branch.
    pub samples: usize,
}

impl Default for JnrOptions {
    fn default() -> Self {
        Self { samples: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsnrOptions {
    pub theta_samples: usize,
    pub cos_phi_samples: usize,
}

impl Default for JsnrOptions {
    fn default() -> Self {
        Self {
            theta_samples: 120,
            cos_phi_samples: 41,
        }
    }
}

/// Range of `(⟨P₁⟩, ⟨P₂⟩)` from the fidelity `c` alone: `E_c` when the two
/// states span the whole space, `conv(E_c ∪ {0})` otherwise.
pub fn jnr_from_fidelity(c: f64, spans_space: bool, opts: &JnrOptions) -> ConvexRegion2D {
    let e = EllipseRegion::new(c);
    let mut pts = ellipse_boundary(&e, opts.samples);
    if !spans_space {
        pts.push([0.0, 0.0]);
    }
    hull_with(
        &pts,
        Provenance::AnalyticJnr,
        RegionParameters {
            c: Some(e.gamma),
            samples: Some(opts.samples),
            ..Default::default()
        },
    )
}

pub fn jnr_two_pure(psi1: &PureState, psi2: &PureState, total_dim: usize, opts: &JnrOptions) -> Result<ConvexRegion2D> {
    if psi1.dim() != psi2.dim() || psi1.dim() != total_dim {
        return Err(Error::DimensionMismatch {
            expected: total_dim,
            found: if psi1.dim() != total_dim {
                psi1.dim()
            } else {
                psi2.dim()
            },
        });
    }
    let c = fidelity(psi1, psi2)?;
    let spans = total_dim == 2 && c < 1.0 - crate::tol::LOCAL_OVERLAP;
    Ok(jnr_from_fidelity(c, spans, opts))
}

/// Hull of pointwise products of `E_{c_A}` and `E_{c_B}` samples.
pub fn jsnr_from_local_fidelities(c_a: f64, c_b: f64, opts: &JsnrOptions) -> ConvexRegion2D {
    let local = |c: f64| {
        let pts = ellipse_samples(&EllipseRegion::new(c), opts.theta_samples, opts.cos_phi_samples);
        // conv(P∘Q) = conv(ext P ∘ ext Q), so products of hull vertices suffice.
        hull_with(&pts, Provenance::Points, RegionParameters::default()).vertices
    };
    let (pa, pb) = (local(c_a), local(c_b));
    let mut prods = Vec::with_capacity(pa.len() * pb.len());
    for a in &pa {
        for b in &pb {
            prods.push([a[0] * b[0], a[1] * b[1]]);
        }
    }
    hull_with(
        &prods,
        Provenance::AnalyticJsnr,
        RegionParameters {
            c_a: Some(c_a),
            c_b: Some(c_b),
            samples: Some(opts.theta_samples),
            cos_phi_samples: Some(opts.cos_phi_samples),
            ..Default::default()
        },
    )
}

pub fn jsnr_two_product(p1: &ProductState, p2: &ProductState, opts: &JsnrOptions) -> Result<ConvexRegion2D> {
    let (c_a, c_b) = p1.local_fidelities(p2)?;
    Ok(jsnr_from_local_fidelities(c_a, c_b, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quantum::random::{random_product_state, random_pure_state};
    use crate::quantum::{tensor, Dims};
    use crate::range::geometry::hausdorff_distance;

    #[test]
    fn ellipse_membership_examples() {
        let e = EllipseRegion::new(0.25);
        assert!(ellipse_contains(&e, [0.75, 0.0], 1e-12));
        let e1 = EllipseRegion::new(1.0);
        assert!(ellipse_contains(&e1, [0.3, 0.3], 1e-12));
        assert!(!ellipse_contains(&e1, [0.3, 0.4], 1e-12));
        let e0 = EllipseRegion::new(0.0);
        assert!(ellipse_contains(&e0, [0.5, 0.5], 1e-12));
        assert!(!ellipse_contains(&e0, [0.6, 0.6], 1e-12));
        assert!(!ellipse_contains(&e, [1.2, 0.5], 1e-12));
    }

    #[test]
    fn boundary_examples() {
        let e = EllipseRegion::new(0.25);
        let p = e.point(0.0, 1.0);
        assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] - 0.25).abs() < 1e-15);
        let p = e.point(FRAC_PI_2, -1.0);
        assert!(p[0].abs() < 1e-15 && (p[1] - 0.75).abs() < 1e-15);
        let b = ellipse_boundary(&e, 500);
        for x in &b {
            assert!(((x[0] + x[1] - 0.75).powi(2) - x[0] * x[1]).abs() < 1e-10);
        }
        assert!(b.iter().any(|x| (x[0] - 0.75).abs() < 1e-15 && x[1].abs() < 1e-15));
    }

    #[test]
    fn interior_samples_are_inside() {
        for g in [0.0, 0.1, 0.5, 0.9, 1.0] {
            let e = EllipseRegion::new(g);
            for x in ellipse_samples(&e, 30, 11) {
                assert!(ellipse_contains(&e, x, 1e-12), "{g} {x:?}");
            }
        }
    }

    #[test]
    fn jnr_examples() {
        let [a, b] = <[ProductState; 2]>::try_from(fixtures::example1_pair()).unwrap();
        let r = jnr_two_pure(a.state(), b.state(), 4, &JnrOptions::default()).unwrap();
        assert!(r.contains([0.0, 0.0], 1e-12));
        assert!(r.vertices.iter().any(|v| v == &[0.0, 0.0]));
        let s = PureState::basis(2, 0);
        let r = jnr_two_pure(&s, &s, 2, &JnrOptions::default()).unwrap();
        assert_eq!(r.vertices.len(), 2);
        assert!(r.contains([0.4, 0.4], 1e-12) && !r.contains([0.4, 0.5], 1e-6));
        let r = jnr_two_pure(&s, &PureState::basis(2, 1), 2, &JnrOptions::default()).unwrap();
        assert_eq!(r.vertices.len(), 2);
        assert!(r.contains([0.3, 0.7], 1e-12) && !r.contains([0.0, 0.0], 1e-6));
        assert!(jnr_two_pure(&s, &PureState::basis(3, 0), 2, &JnrOptions::default()).is_err());
    }

    #[test]
    fn jnr_matches_random_pure_states() {
        // Monte-Carlo oracle: expectation tuples of random states inside V.
        let (p1, p2) = (random_pure_state(2, 1), random_pure_state(2, 2));
        let r = jnr_two_pure(&p1, &p2, 2, &JnrOptions::default()).unwrap();
        let c = fidelity(&p1, &p2).unwrap();
        for s in 0..500 {
            let phi = random_pure_state(2, 100 + s);
            let x = [fidelity(&p1, &phi).unwrap(), fidelity(&p2, &phi).unwrap()];
            assert!(EllipseRegion::new(c).residual(x) <= 1e-10);
            assert!(r.contains(x, 1e-6));
        }
    }

    #[test]
    fn jsnr_example1_geometry() {
        let [a, b] = <[ProductState; 2]>::try_from(fixtures::example1_pair()).unwrap();
        let r = jsnr_two_product(&a, &b, &JsnrOptions::default()).unwrap();
        assert!(r.contains([0.0, 0.5], 1e-9));
        assert!(r.contains([0.5, 0.0], 1e-9));
        assert!(r.contains([1.0, 0.25], 1e-9));
        assert!(r.contains([0.25, 0.25], 0.0));
        assert!(!r.contains([0.75, 0.0], 1e-3));
        // oracle: brute-force axis scan of product tuples
        let mut cap: f64 = 0.0;
        for i in 0..=400 {
            for j in 0..=400 {
                let ta = std::f64::consts::PI * i as f64 / 400.0;
                let tb = std::f64::consts::PI * j as f64 / 400.0;
                for (pa, pb) in [(0.0, 0.0), (std::f64::consts::PI, 0.0), (0.0, std::f64::consts::PI)] {
                    let ab = tensor(&PureState::bloch(ta, pa), &PureState::bloch(tb, pb));
                    let x1 = fidelity(a.state(), &ab).unwrap();
                    let x2 = fidelity(b.state(), &ab).unwrap();
                    if x2 < 1e-6 {
                        cap = cap.max(x1);
                    }
                }
            }
        }
        assert!((cap - 0.5).abs() < 5e-3, "cap {cap}");
        let on_axis = r
            .vertices
            .iter()
            .filter(|v| v[1].abs() < 1e-9)
            .map(|v| v[0])
            .fold(0.0, f64::max);
        assert!((on_axis - 0.5).abs() < 5e-3);
        assert!(hausdorff_distance(&r, &r.swapped()) < 5e-3);
    }

    #[test]
    fn jsnr_depends_only_on_local_fidelities() {
        let dims = Dims::new(2, 3).unwrap();
        let p = random_product_state(dims, 8);
        let q = random_product_state(dims, 9);
        let (ca, cb) = p.local_fidelities(&q).unwrap();
        // Same local fidelities realized by real qubit pairs.
        let qa = ProductState::from_real(&[1.0, 0.0], &[1.0, 0.0]);
        let qb = ProductState::from_real(&[ca.sqrt(), (1.0 - ca).sqrt()], &[cb.sqrt(), (1.0 - cb).sqrt()]);
        let opts = JsnrOptions::default();
        let d = hausdorff_distance(
            &jsnr_two_product(&p, &q, &opts).unwrap(),
            &jsnr_two_product(&qa, &qb, &opts).unwrap(),
        );
        assert!(d < 5e-3);
    }

    #[test]
    fn jsnr_inside_jnr() {
        for s in 0..10 {
            let p = random_product_state(Dims::qubits(), 2 * s);
            let q = random_product_state(Dims::qubits(), 2 * s + 1);
            let jsnr = jsnr_two_product(&p, &q, &JsnrOptions::default()).unwrap();
            let jnr = jnr_two_pure(p.state(), q.state(), 4, &JnrOptions::default()).unwrap();
            for v in &jsnr.vertices {
                assert!(jnr.contains(*v, 1e-6), "seed {s}: {v:?}");
            }
        }
    }
}
