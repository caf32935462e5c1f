use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a positive integer, got 0")]
    Zero,
    #[error("{a} is not invertible modulo {modulus}")]
    NotInvertible { a: i64, modulus: u64 },
    #[error("the Jacobi symbol needs an odd modulus, got {0}")]
    EvenModulus(u64),
    #[error("c(m, k) needs odd m and k >= 2, got m = {m}, k = {k}")]
    BadTwoAdicFactor { m: i64, k: u32 },
    #[error("N must be odd, got {0}")]
    EvenN(u64),
    #[error("N = {n} exceeds the enumeration ceiling {ceiling}")]
    AboveCeiling { n: u64, ceiling: u64 },
    #[error("d must be odd and squarefree, got {0}")]
    BadModulus(u64),
    #[error("residue vector {b:?} does not satisfy the congruence system modulo {d}")]
    InadmissibleClass { d: u64, b: [i64; 4] },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("representation cache: {0}")]
    Cache(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Cache(e.to_string())
    }
}
