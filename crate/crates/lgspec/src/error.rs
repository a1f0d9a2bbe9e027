use thiserror::Error;

/// Every failure the library can report.
///
/// Input problems (parse errors, invalid parameters) and verification
/// failures (a violated identity) share one enum so that callers can map them
/// onto exit codes in one place.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("weights have gcd {0}, expected 1")]
    GcdViolation(u64),
    #[error("weight system has no weights")]
    EmptyWeights,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("index nu = {0} is not positive (general type required)")]
    NotGeneralType(i64),
    #[error("m = {0} is not a narrow index")]
    NotNarrow(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("Gamma evaluated at non-positive argument {0}")]
    NonPositiveArgument(String),
    #[error("operands belong to different weight systems or flavors")]
    FlavorMismatch,
    #[error("broad sector {0} is not supported")]
    UnsupportedBroad(u32),
    #[error("expected a rational integer, got {0}")]
    NonIntegerResult(String),
    #[error("ODE cancellation failed at m = {m}, l = {l}")]
    CancellationFailure { m: u32, l: u32 },
    #[error("precision budget exceeded: {0}")]
    PrecisionBudgetExceeded(String),
    #[error("pole in Barnes prefactor at {0}")]
    PoleInPrefactor(String),
    #[error("root finder did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("quantum relation violated: {0}")]
    RelationViolated(String),
    #[error("identity check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
