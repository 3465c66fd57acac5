//! Finiteness caps for the sporadic search and the parametric exponents.
//!
//! Every cap has the shape `floor(log(c * X^p) / log psi)` and is evaluated
//! exactly as the largest `t` with `psi^t <= c * X^p`.

use num_traits::{Pow, ToPrimitive};

use crate::surd::{max_power_leq, psi};
use crate::{BigInt, Error, Result, Scalar};

/// Cap `max{t : psi^t <= c * X^p}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundSpec {
    pub c: u64,
    pub p: u32,
}

impl BoundSpec {
    pub const fn new(c: u64, p: u32) -> Self {
        Self { c, p }
    }

    /// `c * X^p` as an exact integer.
    pub fn threshold(&self, x: u64) -> BigInt {
        BigInt::from(self.c) * Pow::pow(BigInt::from(x), self.p)
    }

    pub fn cap(&self, x: u64) -> Result<u32> {
        if x == 0 {
            return Err(Error::ZeroSize);
        }
        max_power_leq(&psi::<BigInt>(), &self.threshold(x))
    }
}

/// Sporadic caps in the order m1, m2, ..., m6.
pub const SPORADIC_SPECS: [BoundSpec; 6] = [
    BoundSpec::new(99_660_000_000, 10),
    BoundSpec::new(4_530_000_000, 9),
    BoundSpec::new(17_700_000, 7),
    BoundSpec::new(123_000, 5),
    BoundSpec::new(1_000, 3),
    BoundSpec::new(12, 1),
];

/// Five-term parametric form, exponents l, k, j, i.
pub const FORM1_SPECS: [BoundSpec; 4] = [
    BoundSpec::new(104_000_000, 7),
    BoundSpec::new(4_720_000, 6),
    BoundSpec::new(18_500, 4),
    BoundSpec::new(130, 2),
];

/// Six-term parametric form, exponents m, l, k, j, i.
pub const FORM2_SPECS: [BoundSpec; 5] = [
    BoundSpec::new(8_305_000_000, 9),
    BoundSpec::new(377_500_000, 8),
    BoundSpec::new(1_485_000, 6),
    BoundSpec::new(10_300, 4),
    BoundSpec::new(80, 2),
];

/// Upper limit for `A`: the search runs over `[3, 308 X]`.
pub fn a_cap(x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::ZeroSize);
    }
    x.checked_mul(308).ok_or(Error::Overflow)
}

/// Caps for m1..m6.
pub fn sporadic_bounds(x: u64) -> Result<[u32; 6]> {
    caps_for(&SPORADIC_SPECS, x)
}

/// Caps for the five-term form `(l, k, j, i)` and the six-term form
/// `(m, l, k, j, i)`.
pub fn parametric_bounds(x: u64) -> Result<([u32; 4], [u32; 5])> {
    Ok((caps_for(&FORM1_SPECS, x)?, caps_for(&FORM2_SPECS, x)?))
}

fn caps_for<const N: usize>(specs: &[BoundSpec; N], x: u64) -> Result<[u32; N]> {
    let mut out = [0u32; N];
    for (slot, spec) in out.iter_mut().zip(specs) {
        *slot = spec.cap(x)?;
    }
    Ok(out)
}

/// All caps for one size parameter `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub x: u64,
    /// m1..m6
    pub sporadic: [u32; 6],
    /// l, k, j, i
    pub form1: [u32; 4],
    /// m, l, k, j, i
    pub form2: [u32; 5],
    pub a_cap: u64,
}

impl BoundSet {
    pub fn for_size(x: u64) -> Result<Self> {
        let (form1, form2) = parametric_bounds(x)?;
        Ok(Self {
            x,
            sporadic: sporadic_bounds(x)?,
            form1,
            form2,
            a_cap: a_cap(x)?,
        })
    }

    /// Same set with every sporadic cap clamped to `max`.
    pub fn truncated(&self, max: u32) -> Self {
        let mut out = self.clone();
        for c in &mut out.sporadic {
            *c = (*c).min(max);
        }
        out
    }

    pub fn with_sporadic(&self, caps: [u32; 6]) -> Self {
        Self {
            sporadic: caps,
            ..self.clone()
        }
    }
}

pub(crate) fn bigint_to_scalar<T: Scalar>(v: &BigInt) -> Result<T> {
    if let Some(small) = v.to_i64() {
        return T::from_i64(small).ok_or(Error::Overflow);
    }
    if let Some(wide) = v.to_i128() {
        return T::from_i128(wide).ok_or(Error::Overflow);
    }
    // only reachable for arbitrary-precision targets
    let mut acc = T::zero();
    let base = T::from_u64(1 << 32).ok_or(Error::Overflow)?;
    let (sign, digits) = v.to_u32_digits();
    for limb in digits.iter().rev() {
        acc = crate::checked_mul(&acc, &base)?;
        acc = crate::checked_add(&acc, &T::from_u32(*limb).ok_or(Error::Overflow)?)?;
    }
    Ok(if sign == num_bigint::Sign::Minus {
        -acc
    } else {
        acc
    })
}
