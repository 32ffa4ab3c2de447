use thiserror::Error;

/// Errors surfaced by the geometry engine and the scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point is off the manifold: {detail}")]
    OffManifold { detail: String },

    #[error("arity mismatch: form of degree {degree} evaluated on {vectors} vectors")]
    ArityMismatch { degree: usize, vectors: usize },

    #[error("forms live on different manifolds")]
    ManifoldMismatch,

    #[error("invariant forms live on different bundles")]
    BundleMismatch,

    #[error("empty sample grid")]
    EmptyGrid,

    #[error("no samples in region: {0}")]
    EmptyRegion(String),

    #[error("degenerate zero of u at {point:?}: |directional derivative| = {slope:.3e} below {tol:.3e}")]
    TangentialZero {
        point: Vec<f64>,
        slope: f64,
        tol: f64,
    },

    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    #[error("positivity sweep failed for {what}: min {min:.6e} at {argmin:?}")]
    SweepFailed {
        what: String,
        min: f64,
        argmin: Vec<f64>,
    },

    #[error("profile validation failed: {bullet} (witness t = {witness})")]
    ProfileInvalid { bullet: String, witness: f64 },

    #[error("cutoff validation failed: {bullet} (witness r = {witness})")]
    CutoffInvalid { bullet: String, witness: f64 },

    #[error("tuning failure: {0}")]
    TuningFailure(String),

    #[error("seam mismatch at {point:?}: residual {residual:.3e} exceeds {tol:.3e}")]
    SeamMismatch {
        point: Vec<f64>,
        residual: f64,
        tol: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown cycle '{0}'")]
    UnknownCycle(String),

    #[error("unknown gallery case '{name}'; valid names: {valid}")]
    UnknownGallery { name: String, valid: String },

    #[error("expression error at byte {offset}: {message}")]
    Expr { offset: usize, message: String },

    #[error("scenario schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
