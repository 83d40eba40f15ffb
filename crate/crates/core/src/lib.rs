//! Exact-arithmetic toolkit for Drinfeld modules over `A = F_q[T]`:
//! skew-polynomial arithmetic, Frobenius characteristic polynomials by two
//! independent methods, the eigenvalue-relation polynomial, root-system
//! orbit verification, congruence-filtration group theory over truncated
//! local rings, and a trace-ring surjectivity certification pipeline.
//!
//! Everything is exact: finite fields, polynomial rings, rational
//! functions, and truncated power series. No floating point anywhere.

pub mod drinfeld;
pub mod eigenrel;
pub mod field;
pub mod matgroups;
pub mod matrix;
pub mod newton;
pub mod par;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod rootsys;
pub mod selftest;
pub mod skew;
pub mod surjcert;
pub mod trunc;

pub use field::{Elem, FqField};
pub use poly::{build_extension, enumerate_primes, extension_of, Poly};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible")]
    NonInvertible,
    #[error("input vectors are linearly dependent")]
    DependentInput,
    #[error("mismatched base fields")]
    MismatchedFields,
    #[error("the requested prime is the characteristic of the module")]
    CharacteristicPrime,
    #[error("torsion field degree exceeds cap {0}")]
    TorsionCapExceeded(usize),
    #[error("motive and torsion charpolys disagree: {0}")]
    CharpolyMismatch(String),
    #[error("charpoly coefficient lies outside F_q[T]: {0}")]
    CoefficientOutsideA(String),
    #[error("Weil bounds violated: {0}")]
    NewtonViolation(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("inseparable kernel requested")]
    InseparableKernel,
    #[error("non-exact division")]
    NonExactDivision,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
