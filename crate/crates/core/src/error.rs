use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{x} is not invertible modulo {m}")]
    NotInvertible { x: u64, m: u64 },

    #[error("invalid modulus {m}: {reason}")]
    InvalidModulus { m: u64, reason: &'static str },

    #[error("{generator} is not a primitive root modulo {p}")]
    BadGenerator { generator: u64, p: u64 },

    #[error("value at index {index} has imaginary part {imag:e}, expected a real table")]
    NotRealValued { index: u64, imag: f64 },

    #[error("value {value} at index {index} exceeds the Weil bound 2")]
    WeilViolation { index: u64, value: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("argument {value} outside the admissible range [{min}, {max}]")]
    OutOfRange { value: i64, min: i64, max: i64 },

    #[error("interval of length {len} exceeds the period {m}")]
    IntervalTooLong { len: u64, m: u64 },

    #[error("monotonicity violated at N = {n}: {detail}")]
    MonotonicityViolation { n: u64, detail: &'static str },

    #[error("length {len} outside (sqrt(m), m] for m = {m}")]
    LengthOutOfRange { len: u64, m: u64 },

    #[error("modulus {m} is not squarefree")]
    NotSquarefree { m: u64 },

    #[error("leading coefficient {coeff} is not invertible modulo {m}")]
    BadLeadingCoefficient { coeff: u64, m: u64 },

    #[error("test frequency {h} is zero modulo {p}")]
    InvalidTestFrequency { h: i64, p: u64 },

    #[error("argument {0} outside the domain")]
    DomainError(f64),

    #[error("empty sample")]
    EmptySample,

    #[error("identity violated for p = {p}: {detail} (deviation {deviation:e})")]
    IdentityViolation {
        p: u64,
        detail: &'static str,
        deviation: f64,
    },

    #[error("corrupt table cache: {0}")]
    CacheCorrupt(String),
}

pub type Result<T> = std::result::Result<T, Error>;
