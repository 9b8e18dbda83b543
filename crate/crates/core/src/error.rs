//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid dimension {0} outside supported range 1..=7")]
    DimensionOutOfRange(usize),
    #[error("points per axis {0} must be a power of two >= 4")]
    PointsNotPowerOfTwo(usize),
    #[error("box length {0} must be positive and finite")]
    InvalidBoxLength(f64),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("axis {axis} out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },

    #[error("symbol is singular at r = 0 and no zero-mode policy was given")]
    SingularSymbolAtZero,
    #[error("I-operator requires N >= 1 and 0 <= gamma < 2, got N = {n}, gamma = {gamma}")]
    InvalidISymbol { n: f64, gamma: f64 },
    #[error("Littlewood-Paley cutoff {0} is not a dyadic 2^j")]
    NonDyadicCutoff(f64),

    #[error("exponent {0} outside [1, inf]")]
    InvalidLebesgueExponent(f64),
    #[error("pair catalog is only defined for dimensions 5..=7, got {0}")]
    CatalogDimension(usize),
    #[error("pair ({p}, {q}) is not biharmonic admissible in dimension {d}")]
    NotBiharmonic { p: f64, q: f64, d: usize },
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error("trajectory has {got} samples, need at least {need}")]
    TooFewSamples { got: usize, need: usize },
    #[error("trajectory samples are not uniformly spaced")]
    NonUniformSampling,
    #[error("initial datum has zero mass")]
    ZeroInitialData,

    #[error("nonlinearity dimension {0} must be >= 1")]
    InvalidNonlinearityDimension(usize),
    #[error("solver config invalid: {0}")]
    InvalidSolverConfig(String),
    #[error("blow-up guard tripped at step {step}: max |u| = {max_abs:.3e} exceeds {limit:.3e}")]
    BlowUp { step: usize, max_abs: f64, limit: f64 },

    #[error("delta = {delta} outside the required range (0, {upper})")]
    DeltaOutOfRange { delta: f64, upper: f64 },
    #[error("rescale factor {0} must be a positive integer power of two")]
    NonDyadicScale(f64),
    #[error("tri-decomposition needs 1/lambda < N, got 1/lambda = {inv_lambda}, N = {n}")]
    CutoffOrder { inv_lambda: f64, n: f64 },
    #[error("N = {n} not resolved by the grid (transition band reaches {reach:.4}, per-axis Nyquist {nyquist:.4})")]
    UnresolvedCutoff { n: f64, reach: f64, nyquist: f64 },

    #[error("budget requires dimension in 5..=7, got {0}")]
    BudgetDimension(usize),
    #[error("budget input invalid: {0}")]
    InvalidBudgetInput(String),
    #[error("decay exponent e = {0} is not positive; the global condition fails")]
    NonPositiveDecayExponent(f64),
}
