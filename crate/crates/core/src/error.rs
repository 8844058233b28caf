use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors across the crate. Precondition violations are reported as distinct
/// variants so callers (and the CLI exit-code map) can tell them apart from
/// search exhaustion and internal defects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring parameters must be positive integers, got (a, b) = ({a}, {b})")]
    InvalidRing { a: i64, b: i64 },

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("invalid quaternion text {0:?}: expected \"x0,x1,x2,x3\" with decimal integers")]
    ParseQuaternion(String),

    #[error("diagonal form is invalid: {0}")]
    InvalidForm(&'static str),

    #[error("{n} is not an odd prime")]
    NotOddPrime { n: i64 },

    #[error("h({c}) is not congruent to 0 mod {p}: nothing to lift")]
    HenselNotARoot { c: i64, p: i64 },

    #[error("h'({c}) vanishes mod {p}: the one-step lift does not apply")]
    HenselDerivativeVanishes { c: i64, p: i64 },

    #[error("{d} is not square-free")]
    NotSquareFree { d: i64 },

    #[error("prime {p} does not divide ab = {ab}")]
    PrimeNotDividingAb { p: i64, ab: i64 },

    #[error("(a, b) = ({a}, {b}) is outside the guaranteed family: need square-free a, b with gcd(a, b) <= 2")]
    TheoremNotApplicable { a: i64, b: i64 },

    #[error("d = {d} is divisible by 4: strip square factors before the 2-adic step")]
    DivisibleByFour { d: i64 },

    #[error("moduli {m} and {n} are not coprime")]
    ModuliNotCoprime { m: i64, n: i64 },

    #[error("representations carry different values: {left} vs {right}")]
    ValueMismatch { left: i64, right: i64 },

    #[error("residue tuple is not a proper representation (gcd != 1)")]
    ImproperRepresentation,

    #[error("residue tuple does not satisfy its congruence")]
    CongruenceFailed,

    #[error("element is not in the subgroup generated by squares (a pure coefficient is odd)")]
    NotInSquareSubgroup,

    #[error(
        "no solution with x0 <= {max_x0} for d = {d}; {}",
        if *.watson_guarantee {
            "the modular condition guarantees one exists: raise the bound"
        } else {
            "no modular guarantee applies: the value may not be representable"
        }
    )]
    SearchBoundExceeded {
        d: i64,
        max_x0: i64,
        watson_guarantee: bool,
    },

    #[error("scan budget exceeded: {0}")]
    BudgetExceeded(&'static str),

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("search policy is invalid: {0}")]
    InvalidPolicy(&'static str),

    #[error("prime cutoff must be at least 2, got {0}")]
    InvalidCutoff(u64),
}
