use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Validation failures carry the measured residual so callers can see by how
/// much an invariant was missed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |M - M^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace is not one (|Tr - 1| = {residual:e})")]
    TraceNotOne { residual: f64 },
    #[error("state vector is not normalized (|norm - 1| = {residual:e})")]
    NotNormalized { residual: f64 },
    #[error("eigendecomposition did not converge")]
    EigenFailure,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("rank {rank} is not in 1..={dim}")]
    BadRank { rank: usize, dim: usize },
    #[error("operator list is empty")]
    EmptyList,
    #[error("operators are not trace preserving (max |sum K^dagger K - I| = {residual:e})")]
    NotTracePreserving { residual: f64 },
    #[error("matrix is not unitary (max |U^dagger U - I| = {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("mixing matrix is not an isometry (max |W^dagger W - I| = {residual:e})")]
    BadIsometry { residual: f64 },
    #[error("Choi matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:e})")]
    NotCp { min_eigenvalue: f64 },
    #[error("dilation columns are not orthonormal (residual = {residual:e})")]
    CompletionFailure { residual: f64 },
    #[error("dimension {dim} does not factor as {left}x{right}")]
    BadFactorization { dim: usize, left: usize, right: usize },
    #[error("coefficient constraint {constraint} violated (residual = {residual:e})")]
    BadCoefficients { constraint: &'static str, residual: f64 },
    #[error("states are not kinematically equivalent (largest eigenvalue gap = {gap:e})")]
    NotKinematicallyEquivalent { gap: f64 },
    #[error("strategy {strategy} is not applicable: {reason}")]
    StrategyInapplicable { strategy: &'static str, reason: String },
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for malformed input documents, as opposed to well-formed input
    /// that fails a mathematical check.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::NonFinite)
    }
}
