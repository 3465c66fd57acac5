//! Balancing-like sequences `x[n+1] = A x[n] - x[n-1]` and their Lucas
//! companions `y[n+1] = A y[n] - y[n-1]`, `y[0] = 2`, `y[1] = A`.

use num_integer::Integer;

use crate::surd::{delta_of, gamma_of, QuadraticSurd};
use crate::{checked_mul, checked_sub, scalar_from_u64, BigInt, Error, Result, Scalar};

/// Recurrence parameter `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceParams {
    a: u64,
}

impl SequenceParams {
    /// `A >= 2`. `A = 2` yields the natural numbers and is accepted here
    /// only; everything downstream needs `A >= 3`.
    pub fn new(a: u64) -> Result<Self> {
        if a < 2 {
            return Err(Error::ParameterOutOfRange(a.to_string(), 2));
        }
        Ok(Self { a })
    }

    /// Like [`SequenceParams::new`] but requiring `A >= 3`.
    pub fn search(a: u64) -> Result<Self> {
        if a < 3 {
            return Err(Error::ParameterOutOfRange(a.to_string(), 3));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> u64 {
        self.a
    }
}

/// Terms `x[0..=N]` and `y[0..=N]` for one `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTable<T> {
    params: SequenceParams,
    x: Vec<T>,
    y: Vec<T>,
}

impl<T: Scalar> SequenceTable<T> {
    /// Builds `x[0..=n]` and `y[0..=n]`. Fixed-width scalars fail with
    /// [`Error::Overflow`] once a term does not fit.
    pub fn build(params: SequenceParams, n: usize) -> Result<Self> {
        let a: T = scalar_from_u64(params.a)?;
        let two = T::one() + T::one();
        let mut x = Vec::with_capacity(n + 1);
        let mut y = Vec::with_capacity(n + 1);
        x.push(T::zero());
        y.push(two);
        if n >= 1 {
            x.push(T::one());
            y.push(a.clone());
        }
        for k in 1..n {
            x.push(checked_sub(&checked_mul(&a, &x[k])?, &x[k - 1])?);
            y.push(checked_sub(&checked_mul(&a, &y[k])?, &y[k - 1])?);
        }
        Ok(Self { params, x, y })
    }

    pub fn params(&self) -> SequenceParams {
        self.params
    }

    pub fn a(&self) -> u64 {
        self.params.a
    }

    /// Largest index held.
    pub fn max_index(&self) -> usize {
        self.x.len() - 1
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn term(&self, n: usize) -> Result<&T> {
        self.x.get(n).ok_or(Error::IndexOutOfTable(n))
    }

    pub fn companion(&self, n: usize) -> Result<&T> {
        self.y.get(n).ok_or(Error::IndexOutOfTable(n))
    }

    /// Index `n` with `x[n] == value`, or `None`. Binary search over the
    /// strictly increasing tail `x[1..]`; zero maps to index 0.
    pub fn index_of(&self, value: &T) -> Option<usize> {
        if value.is_zero() {
            return Some(0);
        }
        self.x[1..].binary_search(value).ok().map(|i| i + 1)
    }

    /// Converts to another scalar type, failing if any term does not fit.
    pub fn convert<U: Scalar>(&self) -> Result<SequenceTable<U>> {
        let conv = |v: &T| -> Result<U> {
            let big = to_bigint(v);
            crate::bounds::bigint_to_scalar(&big)
        };
        Ok(SequenceTable {
            params: self.params,
            x: self.x.iter().map(conv).collect::<Result<_>>()?,
            y: self.y.iter().map(conv).collect::<Result<_>>()?,
        })
    }
}

pub(crate) fn to_bigint<T: Scalar>(v: &T) -> BigInt {
    if let Some(small) = v.to_i128() {
        return BigInt::from(small);
    }
    // only BigInt itself can exceed i128
    v.to_string()
        .parse()
        .expect("decimal rendering of an integer")
}

/// `gcd(x[m], x[n]) == x[gcd(m, n)]`, evaluated exactly.
pub fn check_gcd_identity(params: SequenceParams, m: usize, n: usize) -> Result<bool> {
    let table = SequenceTable::<BigInt>::build(params, m.max(n))?;
    let lhs = table.x[m].gcd(&table.x[n]);
    Ok(lhs == table.x[m.gcd(&n)])
}

/// Outcome of checking `gamma^(n-2) <= x[n] <= gamma^(n-1)`, side by side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthCheck {
    pub lower: bool,
    pub upper: bool,
}

impl GrowthCheck {
    pub fn holds(&self) -> bool {
        self.lower && self.upper
    }
}

/// Exact test of `gamma^(n-2) <= x[n] <= gamma^(n-1)` for `n >= 1`.
pub fn check_growth_bounds(params: SequenceParams, n: usize) -> Result<GrowthCheck> {
    if n == 0 {
        return Err(Error::IndexOutOfTable(0));
    }
    let a = params.a;
    let table = SequenceTable::<BigInt>::build(SequenceParams::search(a)?, n)?;
    let xn = &table.x[n];
    let gamma = gamma_of::<BigInt>(a)?;
    // gamma^(-1) = delta
    let low_power = if n == 1 {
        delta_of::<BigInt>(a)?
    } else {
        gamma.pow((n - 2) as u32)?
    };
    let high_power = gamma.pow((n - 1) as u32)?;
    Ok(GrowthCheck {
        lower: low_power.le_integer(xn)?,
        upper: high_power.cmp_integer(xn)? != std::cmp::Ordering::Less,
    })
}

/// `gamma^n` read off the table as `(y[n] + x[n] sqrt(A^2-4)) / 2`.
pub fn gamma_power_from_table<T: Scalar>(
    table: &SequenceTable<T>,
    n: usize,
) -> Result<QuadraticSurd<T>> {
    let a: T = scalar_from_u64(table.a())?;
    let four: T = scalar_from_u64(4)?;
    let d = checked_sub(&checked_mul(&a, &a)?, &four)?;
    QuadraticSurd::new(table.companion(n)?.clone(), table.term(n)?.clone(), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xs(a: u64, n: usize) -> Vec<i64> {
        SequenceTable::<i64>::build(SequenceParams::new(a).unwrap(), n)
            .unwrap()
            .x()
            .to_vec()
    }

    #[test]
    fn small_tables() {
        assert_eq!(xs(6, 4), vec![0, 1, 6, 35, 204]);
        assert_eq!(xs(2, 5), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(xs(5, 2), vec![0, 1, 5]);
        assert!(SequenceParams::new(1).is_err());
        assert!(SequenceParams::search(2).is_err());
    }

    #[test]
    fn companion_starts() {
        let t = SequenceTable::<i64>::build(SequenceParams::new(6).unwrap(), 3).unwrap();
        assert_eq!(t.y(), &[2, 6, 34, 198]);
        let t1 = SequenceTable::<i64>::build(SequenceParams::new(6).unwrap(), 0).unwrap();
        assert_eq!(t1.x(), &[0]);
    }

    #[test]
    fn large_terms_need_bigint() {
        let p = SequenceParams::new(308).unwrap();
        assert_eq!(SequenceTable::<i128>::build(p, 26), Err(Error::Overflow));
        let t = SequenceTable::<BigInt>::build(p, 26).unwrap();
        let digits = t.x()[26].to_string().len();
        assert!((60..=66).contains(&digits), "{digits}");
    }

    #[test]
    fn membership() {
        let t = SequenceTable::<BigInt>::build(SequenceParams::new(6).unwrap(), 10).unwrap();
        assert_eq!(t.index_of(&BigInt::from(35)), Some(3));
        assert_eq!(t.index_of(&BigInt::from(36)), None);
        assert_eq!(t.index_of(&BigInt::from(0)), Some(0));
        assert_eq!(t.index_of(&BigInt::from(1)), Some(1));
        assert_eq!(t.index_of(&BigInt::from(-35)), None);
    }

    #[test]
    fn gcd_examples() {
        assert!(check_gcd_identity(SequenceParams::new(6).unwrap(), 4, 6).unwrap());
        assert!(check_gcd_identity(SequenceParams::new(3).unwrap(), 5, 5).unwrap());
        assert!(check_gcd_identity(SequenceParams::new(7).unwrap(), 2, 3).unwrap());
    }

    #[test]
    fn growth_examples() {
        // x[4] = 21 exceeds psi^3 ~ 17.94, so the upper side fails
        let c = check_growth_bounds(SequenceParams::new(3).unwrap(), 4).unwrap();
        assert_eq!(
            c,
            GrowthCheck {
                lower: true,
                upper: false
            }
        );
        // x[2] = 6 exceeds gamma ~ 5.83
        let c = check_growth_bounds(SequenceParams::new(6).unwrap(), 2).unwrap();
        assert_eq!(
            c,
            GrowthCheck {
                lower: true,
                upper: false
            }
        );
        let c = check_growth_bounds(SequenceParams::new(5).unwrap(), 1).unwrap();
        assert!(c.holds());
        assert!(check_growth_bounds(SequenceParams::new(2).unwrap(), 3).is_err());
    }

    #[test]
    fn table_powers_match_surd_powers() {
        for a in 3..=50u64 {
            let t = SequenceTable::<BigInt>::build(SequenceParams::new(a).unwrap(), 60).unwrap();
            let g = gamma_of::<BigInt>(a).unwrap();
            let mut p = QuadraticSurd::one(g.d().clone()).unwrap();
            for k in 0..=60 {
                assert_eq!(p, gamma_power_from_table(&t, k).unwrap(), "A={a} k={k}");
                p = p.try_mul(&g).unwrap();
            }
        }
    }

    #[test]
    fn binet_difference() {
        for a in 3..=10u64 {
            let t = SequenceTable::<BigInt>::build(SequenceParams::new(a).unwrap(), 40).unwrap();
            let g = gamma_of::<BigInt>(a).unwrap();
            let dl = delta_of::<BigInt>(a).unwrap();
            for n in 0..=40u32 {
                let diff = g.pow(n).unwrap().try_sub(&dl.pow(n).unwrap()).unwrap();
                // x[n] * sqrt(d) in half-units
                let two_x = &t.x()[n as usize] * 2;
                let expected = QuadraticSurd::new(BigInt::from(0), two_x, g.d().clone()).unwrap();
                assert_eq!(diff, expected);
            }
        }
    }

    #[test]
    fn convert_between_widths() {
        let p = SequenceParams::new(10).unwrap();
        let big = SequenceTable::<BigInt>::build(p, 15).unwrap();
        let small: SequenceTable<i64> = big.convert().unwrap();
        assert_eq!(small, SequenceTable::<i64>::build(p, 15).unwrap());
        let huge = SequenceTable::<BigInt>::build(p, 30).unwrap();
        assert_eq!(huge.convert::<i64>(), Err(Error::Overflow));
    }

    proptest! {
        #[test]
        fn recurrence_and_square_identity(a in 3u64..=20, n in 0usize..=50) {
            let t = SequenceTable::<BigInt>::build(SequenceParams::new(a).unwrap(), 50).unwrap();
            let d = BigInt::from(a * a - 4);
            let x = &t.x()[n];
            let y = &t.y()[n];
            prop_assert_eq!(&d * x * x + 4, y * y);
            if n >= 2 {
                prop_assert_eq!(x.clone(), BigInt::from(a) * &t.x()[n - 1] - &t.x()[n - 2]);
            }
        }

        #[test]
        fn index_of_inverts_table(a in 3u64..=40, n in 1usize..=30) {
            let t = SequenceTable::<BigInt>::build(SequenceParams::new(a).unwrap(), 30).unwrap();
            prop_assert_eq!(t.index_of(&t.x()[n].clone()), Some(n));
            prop_assert_eq!(t.index_of(&(&t.x()[n] + 1)), None);
        }
    }
}
