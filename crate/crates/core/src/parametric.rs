//! Parametric solution families.
//!
//! A shifted index pattern `(t + e1, ..., t + ek)` solves the equation for
//! every `t` exactly when `gamma` is a root of `sum ai X^ei`. Since the
//! minimal polynomial of `gamma` is `X^2 - A X + 1`, that is decided by an
//! exact polynomial remainder.

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{a_cap, parametric_bounds};
use crate::search::{Picked, ShardTables};
use crate::sequence::{SequenceParams, SequenceTable};
use crate::{
    checked_add, checked_mul, checked_sub, scalar_from_i64, scalar_from_u64, BigInt, Error, Result,
    Scalar,
};

/// `sum c * X^e` with strictly decreasing exponents and nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial<T> {
    terms: Vec<(u32, T)>,
}

impl<T: Scalar> SparsePolynomial<T> {
    pub fn new(terms: Vec<(u32, T)>) -> Result<Self> {
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::MalformedPolynomial(
                "exponents must be strictly decreasing".into(),
            ));
        }
        if terms.iter().any(|(_, c)| c.is_zero()) {
            return Err(Error::MalformedPolynomial("zero coefficient".into()));
        }
        Ok(Self { terms })
    }

    /// Sorts by exponent, merges repeats and drops zero coefficients.
    pub fn from_terms(mut terms: Vec<(u32, T)>) -> Result<Self> {
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut merged: Vec<(u32, T)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == e => *acc = checked_add(acc, &c)?,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Ok(Self { terms: merged })
    }

    pub fn terms(&self) -> &[(u32, T)] {
        &self.terms
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0)
    }

    /// `(r1, r0)` with `p(X) = r1 X + r0 (mod X^2 - A X + 1)`.
    ///
    /// Horner's scheme: multiplying `r1 X + r0` by `X` and substituting
    /// `X^2 -> A X - 1` gives `(A r1 + r0) X - r1`.
    pub fn reduce_mod_char(&self, a: u64) -> Result<(T, T)> {
        let a: T = scalar_from_u64(a)?;
        let mut r1 = T::zero();
        let mut r0 = T::zero();
        let mut current = match self.degree() {
            Some(d) => d,
            None => return Ok((r1, r0)),
        };
        for (e, c) in &self.terms {
            for _ in *e..current {
                let next = checked_add(&checked_mul(&a, &r1)?, &r0)?;
                r0 = -r1;
                r1 = next;
            }
            current = *e;
            r0 = checked_add(&r0, c)?;
        }
        for _ in 0..current {
            let next = checked_add(&checked_mul(&a, &r1)?, &r0)?;
            r0 = -r1;
            r1 = next;
        }
        Ok((r1, r0))
    }

    pub fn is_gamma_root(&self, a: u64) -> Result<bool> {
        if a < 3 {
            return Err(Error::ParameterOutOfRange(a.to_string(), 3));
        }
        let (r1, r0) = self.reduce_mod_char(a)?;
        Ok(r1.is_zero() && r0.is_zero())
    }
}

/// Shape of a family by its number of varying terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyForm {
    ThreeTerm,
    FourTerm,
    FiveTerm,
    SixTerm,
}

impl FamilyForm {
    pub fn for_len(len: usize) -> Result<Self> {
        Ok(match len {
            3 => Self::ThreeTerm,
            4 => Self::FourTerm,
            5 => Self::FiveTerm,
            6 => Self::SixTerm,
            _ => {
                return Err(Error::MalformedFamily(format!(
                    "{len} varying terms (expected 3 to 6)"
                )))
            }
        })
    }
}

/// Indices `(t + offsets[0], ..., t + offsets[k-1])` with the given
/// coefficients, for every base `t >= 0`. Terms pinned at index 0 are not
/// listed since `x[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyRecord {
    pub a: u64,
    pub offsets: Vec<u32>,
    pub coefficients: Vec<i64>,
    pub form: FamilyForm,
}

impl FamilyRecord {
    pub fn new(a: u64, offsets: Vec<u32>, coefficients: Vec<i64>) -> Result<Self> {
        if offsets.len() != coefficients.len() {
            return Err(Error::MalformedFamily(
                "offsets and coefficients differ in length".into(),
            ));
        }
        if offsets.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::MalformedFamily(
                "offsets must be strictly decreasing".into(),
            ));
        }
        if offsets.last() != Some(&0) {
            return Err(Error::MalformedFamily("last offset must be 0".into()));
        }
        if coefficients.contains(&0) {
            return Err(Error::MalformedFamily("zero coefficient".into()));
        }
        let form = FamilyForm::for_len(offsets.len())?;
        Ok(Self {
            a,
            offsets,
            coefficients,
            form,
        })
    }

    pub fn polynomial<T: Scalar>(&self) -> Result<SparsePolynomial<T>> {
        let terms = self
            .offsets
            .iter()
            .zip(&self.coefficients)
            .map(|(&e, &c)| Ok((e, scalar_from_i64::<T>(c)?)))
            .collect::<Result<Vec<_>>>()?;
        SparsePolynomial::new(terms)
    }
}

/// Checks `sum ci x[t + ei] = 0` for every base `t` in `[0, base_range]`
/// directly on sequence terms.
pub fn verify_family(f: &FamilyRecord, base_range: usize) -> Result<bool> {
    // re-validates the invariants of hand-built records
    let f = FamilyRecord::new(f.a, f.offsets.clone(), f.coefficients.clone())?;
    let params = SequenceParams::search(f.a)?;
    let top = f.offsets[0] as usize + base_range;
    let table = SequenceTable::<BigInt>::build(params, top)?;
    for t in 0..=base_range {
        let mut sum = BigInt::from(0);
        for (&e, &c) in f.offsets.iter().zip(&f.coefficients) {
            sum += &table.x()[t + e as usize] * c;
        }
        if sum != BigInt::from(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-position exponent caps for a family with `len` terms: the leading
/// `len - 1` entries of the six-term envelope `(m, l, k, j, i)`. The last
/// offset is always 0.
pub fn offset_envelope(x: u64, len: usize) -> Result<Vec<u32>> {
    FamilyForm::for_len(len)?;
    let (_, form2) = parametric_bounds(x)?;
    Ok(form2[..len - 1].to_vec())
}

/// Every family with coefficients from `pool` and offsets inside the
/// envelope whose polynomial vanishes at `gamma`, over all `A` in `a_range`.
///
/// Sorted by `A`, then offsets, then coefficients.
pub fn enumerate_families(
    a_range: RangeInclusive<u64>,
    pool: &[Vec<i64>],
    x: u64,
) -> Result<Vec<FamilyRecord>> {
    let cap = a_cap(x)?;
    let (lo, hi) = (*a_range.start(), *a_range.end());
    if lo < 3 || hi > cap || lo > hi {
        return Err(Error::RangeOutsideCap { lo, hi, cap });
    }
    let mut envelopes = Vec::with_capacity(pool.len());
    for coeffs in pool {
        if coeffs.contains(&0) {
            return Err(Error::MalformedFamily("zero coefficient in pool".into()));
        }
        envelopes.push(offset_envelope(x, coeffs.len())?);
    }
    let top = envelopes
        .iter()
        .flat_map(|e| e.first())
        .copied()
        .max()
        .unwrap_or(0) as usize;
    let weight: u64 = pool
        .iter()
        .map(|c| c.iter().map(|v| v.unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0);

    let shards: Vec<Result<Vec<FamilyRecord>>> = (lo..=hi)
        .into_par_iter()
        .map(|a| {
            let tables = ShardTables::build(a, top)?;
            match tables.pick(weight) {
                Picked::I64(t) => families_for_a(t, pool, &envelopes),
                Picked::I128(t) => families_for_a(t, pool, &envelopes),
                Picked::Big(t) => families_for_a(t, pool, &envelopes),
            }
        })
        .collect();
    let mut out = Vec::new();
    for shard in shards {
        out.extend(shard?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `x[e - 1]` with `x[-1] = -1`.
fn previous<T: Scalar>(x: &[T], e: u32) -> T {
    if e == 0 {
        -T::one()
    } else {
        x[e as usize - 1].clone()
    }
}

fn families_for_a<T: Scalar>(
    table: &SequenceTable<T>,
    pool: &[Vec<i64>],
    envelopes: &[Vec<u32>],
) -> Result<Vec<FamilyRecord>> {
    let x = table.x();
    let mut out = Vec::new();
    for (coeffs, env) in pool.iter().zip(envelopes) {
        let c: Vec<T> = coeffs
            .iter()
            .map(|&v| scalar_from_i64(v))
            .collect::<Result<_>>()?;
        // |tail of r1| <= rest * x[e1 - 1] < |c1| x[e1] rules out the leading exponent e1
        let rest: T = c[1..].iter().fold(T::zero(), |acc, v| acc + v.abs());
        let lead = c[0].abs();
        let mut offsets = vec![0u32; coeffs.len()];
        let top = env[0];
        for e1 in (coeffs.len() as u32 - 1)..=top {
            let reach = checked_mul(&rest, &x[e1 as usize - 1])?;
            if checked_mul(&lead, &x[e1 as usize])? > reach {
                continue;
            }
            offsets[0] = e1;
            let r1 = checked_mul(&c[0], &x[e1 as usize])?;
            let r0 = -checked_mul(&c[0], &previous(x, e1))?;
            descend(table, &c, coeffs, env, 1, &mut offsets, r1, r0, &mut out)?;
        }
    }
    Ok(out)
}

// r1 = sum ci x[ei], r0 = -sum ci x[ei - 1]
#[allow(clippy::too_many_arguments)]
fn descend<T: Scalar>(
    table: &SequenceTable<T>,
    c: &[T],
    raw: &[i64],
    env: &[u32],
    pos: usize,
    offsets: &mut Vec<u32>,
    r1: T,
    r0: T,
    out: &mut Vec<FamilyRecord>,
) -> Result<()> {
    let x = table.x();
    let last = c.len() - 1;
    if pos == last {
        // trailing constant term: x[0] = 0, x[-1] = -1
        let r0 = checked_add(&r0, &c[last])?;
        if r1.is_zero() && r0.is_zero() {
            offsets[last] = 0;
            let rec = FamilyRecord::new(table.a(), offsets.clone(), raw.to_vec())?;
            debug_assert!(rec.polynomial::<T>()?.is_gamma_root(table.a())?);
            out.push(rec);
        }
        return Ok(());
    }
    // positions pos..last-1 need distinct offsets above 0
    let min_e = (last - pos) as u32;
    let max_e = env[pos].min(offsets[pos - 1] - 1);
    for e in min_e..=max_e {
        offsets[pos] = e;
        let n1 = checked_add(&r1, &checked_mul(&c[pos], &x[e as usize])?)?;
        let n0 = checked_sub(&r0, &checked_mul(&c[pos], &previous(x, e))?)?;
        descend(table, c, raw, env, pos + 1, offsets, n1, n0, out)?;
    }
    Ok(())
}

/// Every coefficient tuple over `{-1, 1}` of length 3 to 6.
pub fn unit_pool() -> Vec<Vec<i64>> {
    let mut pool = Vec::new();
    for len in 3..=6usize {
        for mask in 0u32..(1 << len) {
            pool.push(
                (0..len)
                    .map(|b| if mask >> b & 1 == 1 { -1 } else { 1 })
                    .collect(),
            );
        }
    }
    pool
}
