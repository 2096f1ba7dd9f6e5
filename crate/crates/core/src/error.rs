use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not Hermitian (max |M - M^dag| = {0:.3e})")]
    NotHermitian(f64),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("weight matrix is not symmetric positive semidefinite")]
    WeightNotPsd,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("channel is not completely positive (min Choi eigenvalue {0:.3e})")]
    NotCp(f64),
    #[error("infeasible model: {0}")]
    Infeasible(String),
    #[error("{kind} solve failed: {status} ({message})")]
    Solver {
        kind: String,
        status: String,
        message: String,
    },
    #[error("derivative has a component the SLD equation cannot reach (norm {0:.3e})")]
    UnsupportedDerivative(f64),
    #[error("Fisher matrix is singular (condition number {0:.3e})")]
    SingularFisher(f64),
    #[error("program size {size} exceeds the cap {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
