use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("curvature sample {index} is not positive ({value})")]
    NonPositiveCurvature { index: usize, value: f64 },
    #[error("total turning {total} deviates from 2*pi by more than 5%")]
    TurningNumberMismatch { total: f64 },
    #[error("curve cannot be closed: tangent mean {mean} is too large")]
    NotClosable { mean: f64 },
    #[error("invalid ellipse axes a = {a}, b = {b} (need a >= b > 0)")]
    InvalidAxes { a: f64, b: f64 },
    #[error("point is {distance} away from the boundary")]
    PointNotOnBoundary { distance: f64 },
    #[error("point lies outside the domain")]
    PointOutside,
    #[error("speed sample {index} is not positive ({value})")]
    NonPositiveSpeed { index: usize, value: f64 },
    #[error("mollification width must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("{samples} samples cannot resolve {modes} Fourier modes")]
    InsufficientSamples { samples: usize, modes: usize },
    #[error("|z| = {0} lies outside the closed unit disk")]
    OutsideDisk(f64),
    #[error("|z| = {0} lies outside the open unit disk")]
    OutsideOpenDisk(f64),
    #[error("|x| = {0} lies outside the open unit ball")]
    OutsideBall(f64),
    #[error("analytic part derivative vanishes on the grid")]
    VanishingFz,
    #[error("Jacobian is not positive ({0})")]
    NonPositiveJacobian(f64),
    #[error("harmonic basis is only tabulated up to degree 6, requested {0}")]
    DegreeTooLarge(usize),
    #[error("polynomial is not harmonic (Laplacian residual {0})")]
    NotHarmonic(f64),
    #[error("|H| = {value} is below the admissibility floor {floor}")]
    HessianTooSmall { value: f64, floor: f64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("radial map with exponent {0} is singular at the origin")]
    OriginSingularity(f64),
    #[error("evaluation left the domain")]
    OutOfDomain,
    #[error("boundary schedule is not monotone (worst slope {0})")]
    NonMonotoneInput(f64),
    #[error("speed profile degenerates (min speed {0})")]
    DegenerateSpeed(f64),
    #[error("target curve is not strictly convex")]
    NonConvexCurve,
    #[error("hypothesis cannot be certified: {0}")]
    HypothesisUnverifiable(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
