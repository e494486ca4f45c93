use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // numerics
    #[error("gamma pole at non-positive integer z = {0}")]
    PoleAtNonPositiveInteger(String),
    #[error("|z| = {0} outside the validated range of weber_d")]
    OutOfValidatedRange(f64),
    #[error("integrand tail does not decay at s = {0}")]
    NonDecayingTail(f64),
    #[error("pole {0} is not inside the integration domain")]
    PoleOutsideDomain(f64),
    #[error("Cauchy integral evaluated on the contour at {0} without a side flag")]
    EvaluationOnContourWithoutSideFlag(f64),
    #[error("quadrature did not converge: estimated error {err:.3e} after {evals} evaluations")]
    QuadratureNotConverged { err: f64, evals: usize },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("ODE integration failed: {0}")]
    OdeFailure(String),

    // scattering
    #[error("background solution is singular at k = 0")]
    SingularAtOrigin,
    #[error("|Im k| * N = {0} exceeds the gauge limit 50")]
    OverflowGauge(f64),
    #[error("column {column} of psi_{solution} is not analytic at Im k = {im_k}")]
    NonAnalyticColumnRequest { solution: u8, column: u8, im_k: f64 },
    #[error("|k| = {0} is below k_min")]
    TooCloseToOrigin(f64),
    #[error("spectral zero on the real axis at k = {0}")]
    SpectralZeroOnRealAxis(f64),
    #[error("k-grid is not symmetric under k -> -k")]
    AsymmetricGrid,
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    // spectral
    #[error("case classification ambiguous: |a2(0)| / max|a2| = {0:.3e}")]
    AmbiguousClassification(f64),
    #[error("a1(iy) has no sign change on the imaginary axis")]
    NoSignChange,
    #[error("a1 has {0} zeros in the upper half-plane")]
    MultipleZeros(usize),
    #[error("log branch cannot be tracked continuously near s = {0}")]
    LogBranchJump(f64),
    #[error("a1(iy) is not real on the imaginary axis at y = {0}")]
    NotRealOnAxis(f64),
    #[error("Jost columns not proportional at i*kappa: ratio^2 - 1 = {0:.3e}")]
    ProportionalityViolated(f64),
    #[error("winding Delta = {0} outside (-pi, pi)")]
    WindingOutOfRange(f64),
    #[error("|1 + r1 r2| = {0:.3e} at a contour endpoint")]
    EndpointDivergence(f64),

    // soliton
    #[error("(x, t) = ({0}, {1}) lies on the singular line of the soliton")]
    OnSingularLine(f64, f64),

    // asymptotics
    #[error("t = 0 has no sector")]
    OnTimeAxis,
    #[error("expected sector {expected}, got {got}")]
    WrongSector { expected: &'static str, got: String },
    #[error("Im nu = {0} outside (-1/2, 1/2)")]
    NuOutOfRange(f64),
    #[error("singular denominator in the asymptotic formula")]
    SingularDenominator,
    #[error("|1 + q1 q2| = {0:.3e} is degenerate")]
    DegenerateJump(f64),
    #[error("delta cache was built for xi = {cached}, requested xi = {requested}")]
    CacheMismatch { cached: f64, requested: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    // validation
    #[error("grid too small: {0} points on an axis, need at least 7")]
    GridTooSmall(usize),
    #[error("grid extends only to |x| = {0}, need {1}")]
    GridTooNarrow(f64, f64),
    #[error("field grid shape mismatch: {0}")]
    ShapeMismatch(String),

    // io
    #[error("I/O failure: {0}")]
    IoFailure(String),
    #[error("parse failure: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}
