//! Exact solver for the six-term equation
//!
//! `C1 x[n1] + C2 x[n2] + C3 x[n3] = C4 x[n4] + C5 x[n5] + C6 x[n6]`
//!
//! over balancing-like sequences `x[k+1] = A x[k] - x[k-1]`, `x[0] = 0`, `x[1] = 1`.
//!
//! The crate computes the finiteness caps for sporadic solutions and parametric
//! exponents with exact quadratic-surd comparisons, enumerates sporadic
//! solutions exhaustively, and detects parametric families by reducing the
//! exponent polynomial modulo `X^2 - A X + 1`.
//!
//! All core arithmetic is generic over a [`Scalar`] integer type. The search
//! engine picks `i64`, `i128` or [`BigInt`] per shard depending on the
//! magnitudes involved; the aliases below name the arbitrary-precision
//! instantiations used by default.

pub mod bounds;
pub mod cli;
pub mod equation;
pub mod error;
pub mod parametric;
pub mod record;
pub mod search;
pub mod sequence;
pub mod surd;

use std::fmt::{Debug, Display};
use std::hash::Hash;

pub use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

pub use error::{Error, Result};

/// Exact signed integer usable as the scalar of every generic routine.
///
/// Fixed-width types report overflow through the `Checked*` traits; callers
/// turn that into [`Error::Overflow`] instead of wrapping.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Integer
    + Signed
    + Roots
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Hash
        + Integer
        + Signed
        + Roots
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

pub(crate) fn scalar_from_i64<T: Scalar>(v: i64) -> Result<T> {
    T::from_i64(v).ok_or(Error::Overflow)
}

pub(crate) fn scalar_from_u64<T: Scalar>(v: u64) -> Result<T> {
    T::from_u64(v).ok_or(Error::Overflow)
}

pub(crate) fn checked_add<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_sub<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn checked_mul<T: Scalar>(a: &T, b: &T) -> Result<T> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// Arbitrary-precision quadratic surd.
pub type Surd = surd::QuadraticSurd<BigInt>;
/// Arbitrary-precision sequence table.
pub type Table = sequence::SequenceTable<BigInt>;
/// Sequence table over `i64`; only valid while every term fits.
pub type Table64 = sequence::SequenceTable<i64>;
/// Sequence table over `i128`; only valid while every term fits.
pub type Table128 = sequence::SequenceTable<i128>;
/// Arbitrary-precision sparse polynomial.
pub type Poly = parametric::SparsePolynomial<BigInt>;

pub use bounds::{BoundSet, BoundSpec};
pub use equation::{CoefficientSet, NormalizedEquation};
pub use parametric::{FamilyForm, FamilyRecord};
pub use search::SolutionRecord;
pub use sequence::SequenceParams;
