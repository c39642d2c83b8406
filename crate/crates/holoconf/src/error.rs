use thiserror::Error;

use crate::expr_ad::ExprError;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("metric is singular at the evaluation point (|det g| = {det:e}, scale {scale:e})")]
    SingularMetric { det: f64, scale: f64 },
    #[error("orthonormal frame construction failed after {attempts} shear attempts")]
    FramePivot { attempts: usize },
    #[error("frame is not orthonormal (residual {residual:e})")]
    FrameNotOrthonormal { residual: f64 },
    #[error("operation needs chart dimension {want}, metric has {got}")]
    Dimension { want: usize, got: usize },
    #[error("volume-form branch could not be followed (det g vanishes near the path)")]
    VolumeBranch,
    #[error("plane spanned by u, w is degenerate")]
    DegenerateSpan,
    #[error("plane diagnostic {diagnostic} = {value:e} lies in the borderline band [1e-8, 1e-6]")]
    BorderlinePlane { diagnostic: &'static str, value: f64 },
    #[error("plane is not an alpha-plane (label {label})")]
    NotAlphaPlane { label: String },
    #[error("vector is not in the plane (residual {residual:e})")]
    NotInPlane { residual: f64 },
    #[error("initial velocity is not isotropic (|g(v,v)| = {residual:e})")]
    NotIsotropic { residual: f64 },
    #[error("isotropy drift {residual:e} at t = {t} exceeds 1e-5")]
    IsotropyDrift { t: f64, residual: f64 },
    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("surface is not totally geodesic (normal residual {residual:e})")]
    NotTotallyGeodesic { residual: f64 },
    #[error("surface differential has rank < 2")]
    RankDeficient,
    #[error("cross-ratio points coincide")]
    CoincidentPoints,
    #[error("induced metric is degenerate (tangent to an isotropic cone)")]
    DegenerateInducedMetric,
    #[error("point lies on the incidence divisor 1 + x.y = 0")]
    IncidenceDivisor,
    #[error("precondition failed: {what} (residual {residual:e})")]
    Precondition { what: String, residual: f64 },
    #[error("manifest error: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, Error>;
