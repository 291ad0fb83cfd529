//! Convex polygons in the plane.

use serde::{Deserialize, Serialize};

use crate::tol;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    AnalyticJnr,
    AnalyticJsnr,
    SampledJnr,
    SampledJsnr,
    /// Outer bound from support halfplanes.
    SupportOuter,
    /// Plain hull of user points.
    Points,
}

/// Construction parameters echoed with a region.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RegionParameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cos_phi_samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<usize>,
}

/// Counterclockwise convex polygon; one or two vertices for degenerate sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexRegion2D {
    pub vertices: Vec<Point>,
    pub provenance: Provenance,
    pub parameters: RegionParameters,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

/// Andrew's monotone chain. Duplicates and collinear points (relative
/// tolerance `1e-12`) are dropped; output is counterclockwise from the
/// lexicographically smallest point.
pub fn convex_hull(points: &[Point]) -> ConvexRegion2D {
    hull_with(points, Provenance::Points, RegionParameters::default())
}

pub(crate) fn hull_with(points: &[Point], provenance: Provenance, parameters: RegionParameters) -> ConvexRegion2D {
    let mut p: Vec<Point> = points
        .iter()
        .copied()
        .filter(|q| q[0].is_finite() && q[1].is_finite())
        .collect();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup_by(|a, b| dist(*a, *b) <= tol::COLLINEAR);
    if p.len() <= 2 {
        return ConvexRegion2D {
            vertices: p,
            provenance,
            parameters,
        };
    }
    let scale = p.iter().fold(0.0f64, |m, q| m.max(q[0].abs()).max(q[1].abs())).max(1.0);
    let eps = tol::COLLINEAR * scale * scale;
    let mut hull: Vec<Point> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for &q in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= eps {
                hull.pop();
            }
            hull.push(q);
        }
        hull.pop();
    }
    if hull.len() < 2 {
        // All points collinear and the chains collapsed: keep the extremes.
        hull = vec![p[0], p[p.len() - 1]];
    }
    ConvexRegion2D {
        vertices: hull,
        provenance,
        parameters,
    }
}

impl ConvexRegion2D {
    pub fn is_polygon(&self) -> bool {
        self.vertices.len() >= 3
    }

    fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Euclidean distance from `x` to the region (zero inside).
    pub fn distance(&self, x: Point) -> f64 {
        match self.vertices.len() {
            0 => f64::INFINITY,
            1 => dist(x, self.vertices[0]),
            2 => segment_distance(x, self.vertices[0], self.vertices[1]),
            _ => {
                if self.edges().all(|(a, b)| cross(a, b, x) >= 0.0) {
                    0.0
                } else {
                    self.boundary_distance(x)
                }
            }
        }
    }

    fn boundary_distance(&self, x: Point) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(x, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Positive outside, negative inside, zero on the boundary.
    pub fn signed_distance(&self, x: Point) -> f64 {
        let d = self.distance(x);
        if d > 0.0 || !self.is_polygon() {
            d
        } else {
            -self.boundary_distance(x)
        }
    }

    /// Halfplane test; positive `tol` expands every edge outward.
    pub fn contains(&self, x: Point, tol: f64) -> bool {
        if !self.is_polygon() {
            return self.distance(x) <= tol;
        }
        self.edges().all(|(a, b)| {
            let len = dist(a, b);
            cross(a, b, x) / len >= -tol
        })
    }

    /// `max_{v} n·v`.
    pub fn support(&self, n: Point) -> f64 {
        self.vertices
            .iter()
            .map(|v| n[0] * v[0] + n[1] * v[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn area(&self) -> f64 {
        if !self.is_polygon() {
            return 0.0;
        }
        0.5 * self.edges().map(|(a, b)| a[0] * b[1] - a[1] * b[0]).sum::<f64>()
    }

    /// The region mirrored across `x₁ = x₂`.
    pub fn swapped(&self) -> ConvexRegion2D {
        let pts: Vec<Point> = self.vertices.iter().map(|v| [v[1], v[0]]).collect();
        hull_with(&pts, self.provenance, self.parameters.clone())
    }
}

pub fn region_contains(r: &ConvexRegion2D, x: Point, tol: f64) -> bool {
    r.contains(x, tol)
}

/// Symmetric Hausdorff distance. For convex polygons the farthest point of
/// one from the other is a vertex, so vertex-to-region distances suffice.
pub fn hausdorff_distance(r1: &ConvexRegion2D, r2: &ConvexRegion2D) -> f64 {
    let one_way =
        |a: &ConvexRegion2D, b: &ConvexRegion2D| a.vertices.iter().map(|&v| b.distance(v)).fold(0.0, f64::max);
    one_way(r1, r2).max(one_way(r2, r1))
}

/// Clips `poly` (counterclockwise) to the halfplane `n·x ≤ h`.
pub(crate) fn clip_halfplane(poly: &[Point], n: Point, h: f64) -> Vec<Point> {
    let f = |p: Point| n[0] * p[0] + n[1] * p[1] - h;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    out
}
