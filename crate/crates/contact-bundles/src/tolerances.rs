//! Numerical tolerances used across the crate.
//!
//! Every threshold used by a validator or a check lives here, not inline.

/// Default central-difference step for scalar fields without analytic partials.
pub const FD_STEP: f64 = 1e-5;

/// Strict-positivity margin for top-form sweeps. Separates genuine
/// degeneracy from round-off.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Unit-norm defect allowed for sphere sample points.
pub const SPHERE_NORM_TOL: f64 = 1e-12;

/// Tangency defect allowed for frame vectors against sphere constraints.
pub const FRAME_TANGENCY_TOL: f64 = 1e-10;

/// Residual allowed when asserting a form is closed at grid samples.
pub const CLOSEDNESS_TOL: f64 = 1e-5;

/// Residual allowed for the top-degree component of an invariant wedge
/// power, which must vanish for degree reasons.
pub const A_COMPONENT_TOL: f64 = 1e-10;

/// Bisection target for zeros of the invariant function u.
pub const ROOT_TOL: f64 = 1e-10;

/// Minimum |directional derivative of u| at a bracketed zero; below this
/// the zero counts as tangential and the dividing set is rejected.
pub const TRANSVERSALITY_TOL: f64 = 1e-6;

/// Regular-value scan threshold for decompositions: a sample with both
/// |u| and |grad u| under this flags 0 as a non-regular value.
pub const REGULARITY_TOL: f64 = 1e-6;

/// Pairing of the curvature against a generator cycle must be within this
/// of an integer.
pub const INTEGRALITY_TOL: f64 = 1e-3;

/// Agreement required between the two representations of a glued form on
/// overlap collars (values and first derivatives in the collar parameter).
pub const SEAM_TOL: f64 = 1e-10;

/// Relative agreement between the generic engine and the closed neck
/// expansion, wherever the engine value exceeds `NECK_ORACLE_FLOOR`.
pub const NECK_ORACLE_REL_TOL: f64 = 1e-4;
pub const NECK_ORACLE_FLOOR: f64 = 1e-8;

/// Pointwise identities of profile constructions (evenness, oddness,
/// prescribed exponential zones) must hold to this.
pub const PROFILE_EXACT_TOL: f64 = 1e-12;

/// Grid size for the one-dimensional profile and cutoff validators.
pub const PROFILE_GRID: usize = 10_000;

/// |g'| above this counts as "inside the transition" for bullet four of
/// the profile validator.
pub const G_PRIME_ACTIVE: f64 = 1e-9;

/// Default constants b sampled by the second weak-filling condition.
pub const W2_DEFAULT_B: [f64; 5] = [0.0, 0.1, 1.0, 10.0, 100.0];

/// Interior standoff for the symplectic pieces, as a fraction of max |u|.
pub const EPS_FRACTION_DEFAULT: f64 = 0.05;

/// Candidate standoff fractions scanned when reporting the largest
/// passing collar margin.
pub const EPS_SCAN_FRACTIONS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Residual allowed for the collar normal form near the outer boundary.
pub const COLLAR_NORMAL_FORM_TOL: f64 = 1e-6;

/// Residual allowed when splitting a closed collar form into a frozen
/// slice representative plus an exact part.
pub const GAUGE_SPLIT_TOL: f64 = 1e-5;

/// Cap and floor of the automatic plateau escalation for neck profiles.
pub const PLATEAU_CAP: f64 = (1u64 << 20) as f64;
pub const TRANSITION_FLOOR: f64 = 1e-3;

/// Cap of the doubling search for the symplectic scaling constant.
pub const SCALE_TUNE_CAP: f64 = (1u64 << 30) as f64;

/// Guard below which an evaluation denominator counts as a domain error
/// in the expression language.
pub const EXPR_DIV_GUARD: f64 = 1e-300;
