use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invariant factor {0} is not >= 2")]
    InvalidFactor(i64),
    #[error("elements or maps live in different groups")]
    ParentMismatch,
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix entry ({row},{col}) does not give a well-defined endomorphism")]
    NotWellDefined { row: usize, col: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("an odd prime is required, got {0}")]
    OddPrimeRequired(u64),
    #[error("generator {0} is not invertible on the module")]
    NonInvertibleGenerator(usize),
    #[error("group closure exceeded cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("{what} of size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("submodule is not stable under group element {g}")]
    NotStable { g: usize },
    #[error("group element {g} does not act on the submodule through the character")]
    NotCyclotomicOnSub { g: usize },
    #[error("group element {g} acts nontrivially on the quotient")]
    NotTrivialOnQuotient { g: usize },
    #[error("group element {g} acts nontrivially on the prime-to-p part")]
    NonTrivialOnNonP { g: usize },
    #[error("no ordinary semistable filtration exists")]
    NotFound,
    #[error("group element {0} is not central")]
    NotCentral(usize),
    #[error("character values do not define a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("generators have gcd {gcd}; the monoid is not cofinite")]
    NotCofinite { gcd: u64 },
    #[error("empty generator set")]
    EmptyGenerators,
    #[error("curve is singular mod {p} for exponent {e} (p divides 2e)")]
    SingularCase { p: u64, e: u64 },
    #[error("Hensel lifting failed for p={p}, k={k}, e={e}")]
    LiftFailed { p: u64, k: u32, e: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
