use serde::{Deserialize, Serialize};

use super::geometry::{ConvexRegion2D, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleVerdict {
    /// Attainable, but only by entangled states.
    Detected,
    /// Attainable by some separable state.
    Compatible,
    /// Not attainable by any state.
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TupleClassification {
    pub tuple: Point,
    pub verdict: TupleVerdict,
    /// Signed distance to the separable range (positive outside).
    pub distance_jsnr: f64,
    /// Signed distance to the full range (positive outside).
    pub distance_jnr: f64,
    pub tolerance: f64,
}

/// Checks `jsnr ⊆ jnr` within `tol`, returning the worst excess.
pub fn check_nested(jnr: &ConvexRegion2D, jsnr: &ConvexRegion2D, tol: f64) -> Result<f64> {
    let excess = jsnr
        .vertices
        .iter()
        .map(|&v| jnr.signed_distance(v))
        .fold(f64::NEG_INFINITY, f64::max);
    if jsnr.vertices.iter().any(|&v| !jnr.contains(v, tol)) {
        return Err(Error::InconsistentRegions(excess));
    }
    Ok(excess)
}

/// Classifier over a validated pair of regions.
#[derive(Debug, Clone, Copy)]
pub struct TupleClassifier<'a> {
    jnr: &'a ConvexRegion2D,
    jsnr: &'a ConvexRegion2D,
    tol: f64,
}

impl<'a> TupleClassifier<'a> {
    pub fn new(jnr: &'a ConvexRegion2D, jsnr: &'a ConvexRegion2D, tol: f64) -> Result<Self> {
        check_nested(jnr, jsnr, tol)?;
        Ok(Self { jnr, jsnr, tol })
    }

    pub fn classify(&self, x: Point) -> TupleClassification {
        let verdict = if !self.jnr.contains(x, self.tol) {
            TupleVerdict::Infeasible
        } else if !self.jsnr.contains(x, self.tol) {
            TupleVerdict::Detected
        } else {
            TupleVerdict::Compatible
        };
        TupleClassification {
            tuple: x,
            verdict,
            distance_jsnr: self.jsnr.signed_distance(x),
            distance_jnr: self.jnr.signed_distance(x),
            tolerance: self.tol,
        }
    }
}

/// Infeasible outside the full range, Detected inside it but outside the
/// separable range, Compatible otherwise.
pub fn classify_tuple(x: Point, jnr: &ConvexRegion2D, jsnr: &ConvexRegion2D, tol: f64) -> Result<TupleClassification> {
    Ok(TupleClassifier::new(jnr, jsnr, tol)?.classify(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quantum::ProductState;
    use crate::range::analytic::{jnr_two_pure, jsnr_two_product, JnrOptions, JsnrOptions};
    use crate::range::geometry::convex_hull;
    use crate::tol::CLASSIFY;

    fn regions() -> (ConvexRegion2D, ConvexRegion2D) {
        let [a, b] = <[ProductState; 2]>::try_from(fixtures::example1_pair()).unwrap();
        (
            jnr_two_pure(a.state(), b.state(), 4, &JnrOptions::default()).unwrap(),
            jsnr_two_product(&a, &b, &JsnrOptions::default()).unwrap(),
        )
    }

    #[test]
    fn example1_tuples() {
        let (jnr, jsnr) = regions();
        assert_eq!(
            classify_tuple([0.75, 0.0], &jnr, &jsnr, CLASSIFY).unwrap().verdict,
            TupleVerdict::Detected
        );
        assert_eq!(
            classify_tuple([0.25, 0.25], &jnr, &jsnr, CLASSIFY).unwrap().verdict,
            TupleVerdict::Compatible
        );
        // (1.8 − 0.75)² = 1.1025 > 4·0.25·0.81
        assert_eq!(
            classify_tuple([0.9, 0.9], &jnr, &jsnr, CLASSIFY).unwrap().verdict,
            TupleVerdict::Infeasible
        );
    }

    #[test]
    fn rejects_inconsistent_regions() {
        let (jnr, _) = regions();
        let big = convex_hull(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        assert!(matches!(
            classify_tuple([0.1, 0.1], &jnr, &big, CLASSIFY),
            Err(Error::InconsistentRegions(_))
        ));
    }
}
