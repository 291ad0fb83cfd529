//! Joint numerical ranges of two observables: the conic family `E_γ`,
//! closed forms for two pure and two product references, support-sweep
//! reconstructions and tuple classification.

pub mod analytic;
pub mod classify;
pub mod export;
pub mod geometry;
pub mod sampled;

pub use analytic::{
    ellipse_boundary, ellipse_contains, ellipse_samples, jnr_from_fidelity, jnr_two_pure, jsnr_from_local_fidelities,
    jsnr_two_product, EllipseRegion, JnrOptions, JsnrOptions,
};
pub use classify::{check_nested, classify_tuple, TupleClassification, TupleClassifier, TupleVerdict};
pub use export::{format_sig, region_csv, region_svg};
pub use geometry::{
    convex_hull, hausdorff_distance, region_contains, ConvexRegion2D, Point, Provenance, RegionParameters,
};
pub use sampled::{sampled_region, sampled_region_states, RangeMode, SampleOptions, SampledRegion, SupportSample};
