//! Exact arithmetic on quadratic surds `(u + v*sqrt(d)) / 2`.
//!
//! Only the subring reached by powers of quadratic units is supported: the
//! product of two elements must again have an even numerator in both
//! components, and this is checked on every multiplication.

use std::cmp::Ordering;
use std::fmt;

use crate::{checked_add, checked_mul, checked_sub, scalar_from_u64, Error, Result, Scalar};

/// Real number `(u + v*sqrt(d)) / 2` with `d >= 2` not a perfect square.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd<T> {
    u: T,
    v: T,
    d: T,
}

impl<T: Scalar> QuadraticSurd<T> {
    pub fn new(u: T, v: T, d: T) -> Result<Self> {
        let two = T::one() + T::one();
        if d < two || is_perfect_square(&d) {
            return Err(Error::BadRadicand(d.to_string()));
        }
        Ok(Self { u, v, d })
    }

    /// The integer `n` written as `(2n + 0*sqrt(d)) / 2`.
    pub fn from_integer(n: T, d: T) -> Result<Self> {
        let two_n = checked_add(&n, &n)?;
        Self::new(two_n, T::zero(), d)
    }

    /// Multiplicative identity for radicand `d`.
    pub fn one(d: T) -> Result<Self> {
        Self::from_integer(T::one(), d)
    }

    pub fn u(&self) -> &T {
        &self.u
    }

    pub fn v(&self) -> &T {
        &self.v
    }

    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn into_parts(self) -> (T, T, T) {
        (self.u, self.v, self.d)
    }

    pub fn conjugate(&self) -> Self {
        Self {
            u: self.u.clone(),
            v: -self.v.clone(),
            d: self.d.clone(),
        }
    }

    fn check_radicand(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::RadicandMismatch(
                self.d.to_string(),
                other.d.to_string(),
            ));
        }
        Ok(())
    }

    /// Exact product. Fails when the radicands differ or when either
    /// interior halving leaves a remainder.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_radicand(other)?;
        let two = T::one() + T::one();
        let uu = checked_mul(&self.u, &other.u)?;
        let vv = checked_mul(&checked_mul(&self.v, &other.v)?, &self.d)?;
        let rational = checked_add(&uu, &vv)?;
        let cross = checked_add(
            &checked_mul(&self.u, &other.v)?,
            &checked_mul(&other.u, &self.v)?,
        )?;
        let (u, ru) = rational.div_rem(&two);
        let (v, rv) = cross.div_rem(&two);
        if !ru.is_zero() || !rv.is_zero() {
            return Err(Error::NonExactHalving);
        }
        Ok(Self {
            u,
            v,
            d: self.d.clone(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_radicand(other)?;
        Ok(Self {
            u: checked_sub(&self.u, &other.u)?,
            v: checked_sub(&self.v, &other.v)?,
            d: self.d.clone(),
        })
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        let mut acc = Self::one(self.d.clone())?;
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Compares the denoted real with the integer `b` using integer
    /// arithmetic only. Never returns `Equal` when `v != 0`.
    pub fn cmp_integer(&self, b: &T) -> Result<Ordering> {
        // (u + v*sqrt(d)) / 2 vs b  <=>  v*sqrt(d) vs 2b - u =: r
        let r = checked_sub(&checked_add(b, b)?, &self.u)?;
        if self.v.is_zero() {
            return Ok(r.cmp(&T::zero()).reverse());
        }
        let lhs = checked_mul(&checked_mul(&self.v, &self.v)?, &self.d)?;
        let rhs = checked_mul(&r, &r)?;
        let ord = match (self.v.is_positive(), r.is_negative()) {
            (true, true) => Ordering::Greater,
            (false, false) => Ordering::Less,
            // both sides non-negative: compare squares
            (true, false) => lhs.cmp(&rhs),
            // both sides negative: larger magnitude is smaller
            (false, true) => rhs.cmp(&lhs),
        };
        Ok(ord)
    }

    /// `self <= b`.
    pub fn le_integer(&self, b: &T) -> Result<bool> {
        Ok(self.cmp_integer(b)? != Ordering::Greater)
    }
}

impl<T: Scalar> fmt::Display for QuadraticSurd<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt({}))/2", self.u, self.v, self.d)
    }
}

pub fn is_perfect_square<T: Scalar>(n: &T) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    r.clone() * r == *n
}

/// `gamma = (A + sqrt(A^2 - 4)) / 2`, the dominant root of `X^2 - A X + 1`.
pub fn gamma_of<T: Scalar>(a: u64) -> Result<QuadraticSurd<T>> {
    if a < 3 {
        return Err(Error::ParameterOutOfRange(a.to_string(), 3));
    }
    let a: T = scalar_from_u64(a)?;
    let four: T = scalar_from_u64(4)?;
    let d = checked_sub(&checked_mul(&a, &a)?, &four)?;
    QuadraticSurd::new(a, T::one(), d)
}

/// `delta = 1 / gamma = (A - sqrt(A^2 - 4)) / 2`.
pub fn delta_of<T: Scalar>(a: u64) -> Result<QuadraticSurd<T>> {
    Ok(gamma_of(a)?.conjugate())
}

/// `psi = (3 + sqrt(5)) / 2`, the smallest admissible gamma.
pub fn psi<T: Scalar>() -> QuadraticSurd<T> {
    gamma_of(3).expect("A = 3 is admissible")
}

/// Largest `t >= 0` with `base^t <= bound`, by repeated multiplication.
pub fn max_power_leq<T: Scalar>(base: &QuadraticSurd<T>, bound: &T) -> Result<u32> {
    if base.le_integer(&T::one())? {
        return Err(Error::BaseNotGreaterThanOne);
    }
    let mut power = QuadraticSurd::one(base.d.clone())?;
    if !power.le_integer(bound)? {
        // bound < 1; the caller's precondition is bound >= 1
        return Ok(0);
    }
    let mut t = 0;
    loop {
        let next = power.try_mul(base)?;
        if !next.le_integer(bound)? {
            return Ok(t);
        }
        power = next;
        t += 1;
    }
}
