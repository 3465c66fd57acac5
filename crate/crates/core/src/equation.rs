//! Input coefficients and their rewrite into the single-sided form
//! `A1 x[m1] + ... + A6 x[m6] = 0`.

use crate::{Error, Result};

/// Coefficients `C1..C6` of `C1 x[n1] + C2 x[n2] + C3 x[n3] = C4 x[n4] + C5 x[n5] + C6 x[n6]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoefficientSet([i64; 6]);

impl CoefficientSet {
    pub fn new(c: [i64; 6]) -> Result<Self> {
        if c[0] == 0 || c[1] == 0 || c[2] == 0 {
            return Err(Error::DegenerateCoefficients);
        }
        Ok(Self(c))
    }

    pub fn values(&self) -> [i64; 6] {
        self.0
    }

    /// `X = max |Ci|`.
    pub fn size_parameter(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// Moves the right-hand side across. With `collide` (the case `n1 = n4`)
    /// the first terms of both sides merge into `(C1 - C4)` and the
    /// coefficient vector becomes `(C1 - C4, C2, C3, -C5, -C6, 0)`.
    /// Otherwise it becomes `(C1, C2, C3, -C4, -C5, -C6)`.
    ///
    /// `X` is always taken from the original coefficients.
    pub fn normalize(&self, collide: bool) -> Result<NormalizedEquation> {
        let c = self.0;
        let neg = |v: i64| v.checked_neg().ok_or(Error::Overflow);
        let coefficients = if collide {
            if c[0] == c[3] {
                return Err(Error::DegenerateLeadingTerm);
            }
            let lead = c[0].checked_sub(c[3]).ok_or(Error::Overflow)?;
            [lead, c[1], c[2], neg(c[4])?, neg(c[5])?, 0]
        } else {
            [c[0], c[1], c[2], neg(c[3])?, neg(c[4])?, neg(c[5])?]
        };
        NormalizedEquation::new(coefficients, self.size_parameter())
    }
}

/// `A1 x[m1] + ... + A6 x[m6] = 0` with size parameter `X`.
///
/// Coefficient positions are attached to rank: the search enumerates
/// `m1 > m2 >= m3 >= m4 >= m5 >= m6 >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedEquation {
    coefficients: [i64; 6],
    x: u64,
}

impl NormalizedEquation {
    /// Builds the searchable form directly, bypassing [`CoefficientSet`].
    pub fn new(coefficients: [i64; 6], x: u64) -> Result<Self> {
        if coefficients[0] == 0 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        if x == 0 {
            return Err(Error::ZeroSize);
        }
        Ok(Self { coefficients, x })
    }

    /// Uses `max |Ai|` as the size parameter.
    pub fn from_coefficients(coefficients: [i64; 6]) -> Result<Self> {
        let x = coefficients
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0);
        Self::new(coefficients, x)
    }

    pub fn coefficients(&self) -> [i64; 6] {
        self.coefficients
    }

    pub fn size(&self) -> u64 {
        self.x
    }

    pub fn with_size(self, x: u64) -> Result<Self> {
        Self::new(self.coefficients, x)
    }
}
