use thiserror::Error;

/// Every failure the library can report. Variants carry enough context to
/// reproduce the failing input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HilbError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("({d}, {genus}) is not a K3-type surface")]
    NotK3 { d: i64, genus: String },
    #[error("genus {genus} does not exist for D={d}")]
    NoSuchGenus { d: i64, genus: String },
    #[error("division by zero in the quadratic field")]
    DivisionByZero,
    #[error("argument must be positive, got {0}")]
    NonPositive(i64),
    #[error("kronecker symbol (0/0) is undefined")]
    KroneckerZeroZero,
    #[error("matrix is not torsion of order 2 or 3: trace {0}")]
    NotTorsion(String),
    #[error("incomplete enumeration: {0}")]
    IncompleteEnumeration(String),
    #[error("orbit merge did not converge: {0}")]
    OrbitMerge(String),
    #[error("formula misuse: {0}")]
    FormulaMisuse(String),
    #[error("accounting residue for (M,N)=({m},{n}): {detail}")]
    AccountingResidue { m: u32, n: u32, detail: String },
    #[error("does not contract to smooth points: {0}")]
    NotSmoothContraction(String),
    #[error("no self-intersection assignment for cluster {0}")]
    Infeasible(String),
    #[error("self-intersection assignment is not unique for cluster {0}")]
    Ambiguous(String),
    #[error("unexpected kernel dimension {0}")]
    KernelDimension(usize),
    #[error("golden data: {0}")]
    Golden(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, HilbError>;
