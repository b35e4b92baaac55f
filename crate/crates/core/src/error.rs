use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} is within the pole tolerance of the pole at {pole}")]
    PoleProximity { point: Complex64, pole: Complex64 },

    #[error("point {0} lies outside the closed unit disk")]
    OutsideDisk(Complex64),

    #[error("evaluation at the singular atom {atom}")]
    AtAtom { atom: Complex64 },

    #[error("evaluation at the arc endpoint {endpoint}")]
    AtArcEndpoint { endpoint: Complex64 },

    #[error("|z| = {radius} exceeds the resolvable radius {limit} for a grid of {n} samples")]
    UnderResolved { radius: f64, limit: f64, n: usize },

    #[error("grid size {0} must be a power of two and at least 64")]
    GridSize(usize),

    #[error("grids of different sizes: {0} and {1}")]
    GridMismatch(usize, usize),

    #[error("frequency {max_n} is not below half the grid size {n}")]
    FrequencyTooLarge { max_n: usize, n: usize },

    #[error("boundary data is not real (max |Im| = {max_imag})")]
    NonReal { max_imag: f64 },

    #[error("boundary data is not integer valued (sample {index} = {value})")]
    NonInteger { index: usize, value: f64 },

    #[error("level data must be nonnegative (sample {index} = {value})")]
    NegativeLevel { index: usize, value: f64 },

    #[error("invalid inner function data: {0}")]
    InvalidInner(String),

    #[error("function is not inner: boundary modulus deviates from 1 by {deviation}")]
    NotInner { deviation: f64 },

    #[error("rational function has a pole inside the disk at {0}")]
    PoleInsideDisk(Complex64),

    #[error("rational data required: {0}")]
    NonRational(String),

    #[error("invalid arc: {0}")]
    InvalidArc(String),

    #[error("value at the origin is not real: {0}")]
    NotRealAtOrigin(Complex64),

    #[error("value at the origin vanishes")]
    ZeroAtOrigin,

    #[error("function is negative on the boundary at angle {theta} (value {value})")]
    Negativity { theta: f64, value: Complex64 },

    #[error("sequence verdict is {0}, evaluation requires convergence")]
    NotConverged(String),

    #[error("function fails the weak decay test; the A-integral is undefined")]
    NonMember,

    #[error("grid mean {0} is not close to zero")]
    MeanNotZero(Complex64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("schema error: {0}")]
    Schema(String),
}
