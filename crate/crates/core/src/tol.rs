//! Numerical thresholds shared across modules.
//!
//! Analytic identities are checked at the `1e-9`..`1e-12` level; iterative
//! searches (seesaw, grids) are only trusted to a few parts in `1e3`.

/// Vectors shorter than this are treated as zero.
pub const ZERO_VECTOR: f64 = 1e-14;

/// Normalization slack for [`crate::PureState`].
pub const NORMALIZATION: f64 = 1e-12;

/// Hermiticity slack accepted at construction.
pub const HERMITIAN: f64 = 1e-9;

/// Eigenvalues within this absolute distance of `λ_max` are grouped.
pub const DEGENERACY: f64 = 1e-9;

/// Ties between largest-modulus components when fixing a global phase.
pub const PHASE_TIE: f64 = 1e-12;

/// Gram-Schmidt residuals below this are dropped as linearly dependent.
pub const SPAN_RESIDUAL: f64 = 1e-10;

/// Singular values above this count toward the Schmidt rank.
pub const SCHMIDT_RANK: f64 = 1e-10;

/// Strictness for `0 < |⟨a₁|a₂⟩| < 1`.
pub const LOCAL_OVERLAP: f64 = 1e-10;

/// Minimal Gram determinant of a reference set.
pub const GRAM_DETERMINANT: f64 = 1e-12;

/// Density operators: trace and positivity slack.
pub const DENSITY_TRACE: f64 = 1e-10;
pub const DENSITY_POSITIVITY: f64 = 1e-10;

/// Eigenvalues above this define the support of a density operator.
pub const SUPPORT: f64 = 1e-10;

/// A witness is effective iff `λ_max − α` exceeds this.
pub const WITNESS_MARGIN: f64 = 1e-6;

/// Default CES tolerance: `is_ces` iff the product overlap is below `1 − tol`.
pub const CES: f64 = 1e-6;

/// CES certificates with overlap in `[1 − CES_BORDERLINE_FACTOR·tol, 1 − tol)`
/// are flagged as borderline.
pub const CES_BORDERLINE_FACTOR: f64 = 1e3;

/// Collinearity tolerance used by the convex hull.
pub const COLLINEAR: f64 = 1e-12;

/// Default tolerance of tuple classification against polygonal regions.
pub const CLASSIFY: f64 = 1e-4;
