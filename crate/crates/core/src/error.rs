use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Pfaffian of odd dimension {0}")]
    OddDimension(usize),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("skew block is not invertible")]
    SingularInput,
    #[error("top-left {0}x{0} block of theta is not invertible")]
    SingularBlock(usize),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("matrix has non-integer entries")]
    NotIntegral,
    #[error("sigma_{0} has determinant -1 and is rejected without allow_odd")]
    OddKRejected(usize),
    #[error("sigma_{k} needs 0 <= k <= n = {n}")]
    SigmaOutOfRange { k: usize, n: usize },
    #[error("not an element of O(n,n|Z): {0}")]
    NotInGroup(String),
    #[error("C theta + D is singular; theta is outside the domain of g")]
    OutsideDomain,
    #[error("malformed lattice vector: {0}")]
    MalformedVector(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("dimension {n} exceeds the configured cap {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("no intertwiner exists (kernel is trivial)")]
    NoIntertwiner,
    #[error("intertwiner kernel has dimension {0} > 1")]
    AmbiguousIntertwiner(usize),
    #[error("vacuum coefficient of U theta_hat vanishes; g is not defined at theta")]
    DomainFailure,
    #[error("lattice element parity does not match")]
    ParityMismatch,
    #[error("induced K-theory action is not integral-unimodular: {0}")]
    NonIntegralAction(String),
    #[error("expected a {expected} matrix, got {rows}x{cols}")]
    WrongDimension {
        expected: String,
        rows: usize,
        cols: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal identity violated: {0}")]
    InternalAssertion(String),
}

impl Error {
    /// True for failures of an identity that must always hold.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            Error::InternalAssertion(_)
                | Error::NonIntegralAction(_)
                | Error::AmbiguousIntertwiner(_)
        )
    }

    /// True when the failure is the expected partiality of the action.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::OutsideDomain
                | Error::DomainFailure
                | Error::SingularBlock(_)
                | Error::SingularInput
        )
    }
}
