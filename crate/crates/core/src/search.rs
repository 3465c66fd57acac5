//! Exhaustive search for sporadic solutions of
//! `A1 x[m1] + ... + A6 x[m6] = 0`, `m1 > m2 >= ... >= m6 >= 0`.
//!
//! One shard per value of `A`. Inside a shard the indices `m6..m2` are
//! enumerated in a loop nest that carries partial sums; `m1` is resolved by
//! membership lookup of the residual. A branch is skipped only when the
//! table itself proves that no `m1` can balance it.

use std::collections::HashSet;
use std::ops::RangeInclusive;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bounds::BoundSet;
use crate::equation::NormalizedEquation;
use crate::sequence::{SequenceParams, SequenceTable};
use crate::{checked_add, checked_mul, scalar_from_i64, BigInt, Error, Result, Scalar, Table};

/// A sporadic hit: `sum coefficients[i] * x[indices[i]] = 0` for this `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionRecord {
    pub a: u64,
    /// m1..m6
    pub indices: [u32; 6],
    /// A1..A6
    pub coefficients: [i64; 6],
    pub residual_check: bool,
}

impl SolutionRecord {
    /// Re-evaluates the defining sum from scratch.
    pub fn verify(&self) -> Result<bool> {
        if self.coefficients[0] == 0 || self.indices.windows(2).any(|w| w[0] < w[1]) {
            return Ok(false);
        }
        if self.indices[0] == self.indices[1] {
            return Ok(false);
        }
        let table = Table::build(SequenceParams::search(self.a)?, self.indices[0] as usize)?;
        Ok(residual(&table, &self.indices, &self.coefficients)?.is_zero())
    }
}

/// `x[m1] = x[1] + x[1] + x[1] + x[1] + x[1]` at `A = 5`.
pub fn reference_hit() -> SolutionRecord {
    SolutionRecord {
        a: 5,
        indices: [2, 1, 1, 1, 1, 1],
        coefficients: [1, -1, -1, -1, -1, -1],
        residual_check: true,
    }
}

fn residual<T: Scalar>(table: &SequenceTable<T>, idx: &[u32; 6], coeffs: &[i64; 6]) -> Result<T> {
    let mut sum = T::zero();
    for (&m, &c) in idx.iter().zip(coeffs) {
        let term = checked_mul(&scalar_from_i64::<T>(c)?, table.term(m as usize)?)?;
        sum = checked_add(&sum, &term)?;
    }
    Ok(sum)
}

/// Integer width that holds every intermediate value of a shard.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Width {
    I64,
    I128,
    Big,
}

/// Picks the narrowest width holding `(weight + 1) * max |x|`, where
/// `weight` is the sum of absolute coefficients.
pub fn width_for(table: &Table, weight: u64) -> Width {
    let top = table.x().last().cloned().unwrap_or_default();
    let bound = top * BigInt::from(weight.saturating_add(1));
    if bound.to_i64().is_some() {
        Width::I64
    } else if bound.to_i128().is_some() {
        Width::I128
    } else {
        Width::Big
    }
}

/// One shard's tables at every width that fits.
pub(crate) struct ShardTables {
    pub(crate) big: Table,
    narrow64: Option<SequenceTable<i64>>,
    narrow128: Option<SequenceTable<i128>>,
}

/// The narrowest table able to carry sums of the given weight.
pub(crate) enum Picked<'a> {
    I64(&'a SequenceTable<i64>),
    I128(&'a SequenceTable<i128>),
    Big(&'a Table),
}

impl ShardTables {
    pub(crate) fn build(a: u64, n: usize) -> Result<Self> {
        let big = Table::build(SequenceParams::search(a)?, n)?;
        Ok(Self {
            narrow64: big.convert().ok(),
            narrow128: big.convert().ok(),
            big,
        })
    }

    /// `weight` is the sum of absolute coefficients.
    pub(crate) fn pick(&self, weight: u64) -> Picked<'_> {
        match (
            width_for(&self.big, weight),
            &self.narrow64,
            &self.narrow128,
        ) {
            (Width::I64, Some(t), _) => Picked::I64(t),
            (Width::I64 | Width::I128, _, Some(t)) => Picked::I128(t),
            _ => Picked::Big(&self.big),
        }
    }

    fn scan(
        &self,
        coeffs: &[i64; 6],
        caps: &[u32; 6],
        out: &mut Vec<SolutionRecord>,
    ) -> Result<()> {
        match self.pick(coeffs.iter().map(|c| c.unsigned_abs()).sum()) {
            Picked::I64(t) => scan(t, coeffs, caps, out),
            Picked::I128(t) => scan(t, coeffs, caps, out),
            Picked::Big(t) => scan(t, coeffs, caps, out),
        }
    }
}

/// Core loop nest over one table. The table must hold exactly `x[0..=caps[0]]`
/// so that membership lookup enforces the cap on `m1`.
fn scan<T: Scalar>(
    table: &SequenceTable<T>,
    coeffs: &[i64; 6],
    caps: &[u32; 6],
    out: &mut Vec<SolutionRecord>,
) -> Result<()> {
    let cap1 = caps[0] as usize;
    debug_assert_eq!(table.max_index(), cap1);
    if cap1 == 0 {
        return Ok(());
    }
    let x = table.x();
    let c: Vec<T> = coeffs
        .iter()
        .map(|&v| scalar_from_i64(v))
        .collect::<Result<_>>()?;
    // m2..m6 sit strictly below m1 <= cap1
    let mut eff = [0usize; 6];
    for i in 1..6 {
        eff[i] = (caps[i] as usize).min(cap1 - 1);
    }
    let scaled: Vec<Vec<T>> = (0..6)
        .map(|i| x[..=eff[i]].iter().map(|v| checked_mul(&c[i], v)).collect())
        .collect::<Result<_>>()?;

    // |A2 x[m2] + ... + A6 x[m6]| <= weight * x[m2] and |A1 x[m1]| >= |A1| x[m2 + 1],
    // so m2 is viable only if |A1| x[m2 + 1] <= weight * x[m2].
    let weight: T = c[1..].iter().fold(T::zero(), |acc, v| acc + v.abs());
    let lead = c[0].abs();
    let viable: Vec<bool> = (0..=eff[1])
        .map(|m| Ok(checked_mul(&lead, &x[m + 1])? <= checked_mul(&weight, &x[m])?))
        .collect::<Result<_>>()?;
    let mut reachable = vec![false; eff[1] + 2];
    for m in (0..=eff[1]).rev() {
        reachable[m] = viable[m] || reachable[m + 1];
    }
    let reach = |m: usize| m <= eff[1] && reachable[m];
    let one = T::one();

    for m6 in 0..=eff[5] {
        if !reach(m6) {
            continue;
        }
        let p6 = scaled[5][m6].clone();
        for m5 in m6..=eff[4] {
            if !reach(m5) {
                continue;
            }
            let p5 = checked_add(&p6, &scaled[4][m5])?;
            for m4 in m5..=eff[3] {
                if !reach(m4) {
                    continue;
                }
                let p4 = checked_add(&p5, &scaled[3][m4])?;
                for m3 in m4..=eff[2] {
                    if !reach(m3) {
                        continue;
                    }
                    let p3 = checked_add(&p4, &scaled[2][m3])?;
                    for m2 in m3..=eff[1] {
                        if !viable[m2] {
                            continue;
                        }
                        // A1 x[m1] = s
                        let s = -checked_add(&p3, &scaled[1][m2])?;
                        if s.is_zero() {
                            continue;
                        }
                        let target = if c[0] == one {
                            s
                        } else {
                            let (q, r) = s.div_rem(&c[0]);
                            if !r.is_zero() {
                                continue;
                            }
                            q
                        };
                        if !target.is_positive() {
                            continue;
                        }
                        let Some(m1) = table.index_of(&target) else {
                            continue;
                        };
                        if m1 <= m2 {
                            continue;
                        }
                        let indices = [m1, m2, m3, m4, m5, m6].map(|m| m as u32);
                        let ok = residual(table, &indices, coeffs)?.is_zero();
                        assert!(ok, "emitted record fails re-substitution: {indices:?}");
                        out.push(SolutionRecord {
                            a: table.a(),
                            indices,
                            coefficients: *coeffs,
                            residual_check: ok,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// `m1 > m2 > m3`, `m4 > m5 > m6` and `A1 x[m1] + A4 x[m4] != 0`: the
/// constraints of the two-sided equation with positions 1-3 on the left
/// and 4-6 on the right.
pub fn is_strict_original_form(rec: &SolutionRecord, table: &Table) -> Result<bool> {
    let m = rec.indices;
    if !(m[0] > m[1] && m[1] > m[2] && m[3] > m[4] && m[4] > m[5]) {
        return Ok(false);
    }
    let lead = table.term(m[0] as usize)? * rec.coefficients[0];
    let right = table.term(m[3] as usize)? * rec.coefficients[3];
    Ok(lead + right != BigInt::from(0))
}

/// Sporadic solutions for one `A` under the sporadic caps of `bounds`.
pub fn find_sporadic(
    a: u64,
    eq: &NormalizedEquation,
    bounds: &BoundSet,
) -> Result<Vec<SolutionRecord>> {
    if a < 3 || a > bounds.a_cap {
        return Err(Error::RangeOutsideCap {
            lo: a,
            hi: a,
            cap: bounds.a_cap,
        });
    }
    let tables = ShardTables::build(a, bounds.sporadic[0] as usize)?;
    let mut out = Vec::new();
    tables.scan(&eq.coefficients(), &bounds.sporadic, &mut out)?;
    out.sort();
    Ok(out)
}

fn check_range(range: &RangeInclusive<u64>, cap: u64) -> Result<()> {
    let (lo, hi) = (*range.start(), *range.end());
    if lo < 3 || hi > cap || lo > hi {
        return Err(Error::RangeOutsideCap { lo, hi, cap });
    }
    Ok(())
}

/// Sweeps every `A` in `range` (default `[3, a_cap(X)]`) for each equation,
/// on the current rayon pool. Output is sorted and deduplicated.
pub fn search_equations(
    eqs: &[[i64; 6]],
    bounds: &BoundSet,
    range: RangeInclusive<u64>,
    strict: bool,
) -> Result<Vec<SolutionRecord>> {
    check_range(&range, bounds.a_cap)?;
    if eqs.iter().any(|c| c[0] == 0) {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let shards: Vec<Result<Vec<SolutionRecord>>> = range
        .into_par_iter()
        .map(|a| {
            let tables = ShardTables::build(a, bounds.sporadic[0] as usize)?;
            let mut out = Vec::new();
            for c in eqs {
                tables.scan(c, &bounds.sporadic, &mut out)?;
            }
            if strict {
                let mut kept = Vec::with_capacity(out.len());
                for r in out {
                    if is_strict_original_form(&r, &tables.big)? {
                        kept.push(r);
                    }
                }
                out = kept;
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for shard in shards {
        all.extend(shard?);
    }
    all.sort();
    all.dedup();
    Ok(all)
}

/// All sporadic solutions of `eq` within the caps for its size parameter.
pub fn search_all(
    eq: &NormalizedEquation,
    a_override: Option<RangeInclusive<u64>>,
) -> Result<Vec<SolutionRecord>> {
    let bounds = BoundSet::for_size(eq.size())?;
    let range = a_override.unwrap_or(3..=bounds.a_cap);
    search_equations(&[eq.coefficients()], &bounds, range, false)
}

/// Number of `(m2, ..., m6)` tuples the loop nest would visit without any
/// skipping.
pub fn index_tuple_count(caps: &[u32; 6]) -> u128 {
    let Some(top) = caps[0].checked_sub(1) else {
        return 0;
    };
    // ways[m] = tuples for the positions processed so far ending at value m
    let eff: Vec<usize> = caps[1..].iter().map(|&c| c.min(top) as usize).collect();
    let width = top as usize + 1;
    let mut ways = vec![0u128; width];
    for w in ways.iter_mut().take(eff[4] + 1) {
        *w = 1;
    }
    for &cap in eff[..4].iter().rev() {
        let mut next = vec![0u128; width];
        let mut run = 0u128;
        for m in 0..width {
            run += ways[m];
            if m <= cap {
                next[m] = run;
            }
        }
        ways = next;
    }
    ways.iter().sum()
}

/// Upper bound on loop-nest leaves for a sweep.
pub fn estimate_leaves(bounds: &BoundSet, range: &RangeInclusive<u64>, equations: usize) -> u128 {
    let shards = (range.end() + 1).saturating_sub(*range.start()) as u128;
    index_tuple_count(&bounds.sporadic) * shards * equations as u128
}

/// Coefficient vectors `(1, -a2, ..., -a6)` for every `(a2..a6)` in `{0, +-1}^5`.
pub fn unit_patterns() -> Vec<[i64; 6]> {
    let mut out = Vec::with_capacity(243);
    for code in 0..243u32 {
        let mut c = [1i64; 6];
        let mut rest = code;
        for slot in c.iter_mut().skip(1) {
            *slot = (rest % 3) as i64 - 1;
            rest /= 3;
        }
        out.push(c);
    }
    out
}

/// Key identifying records that state the same relation: nonzero terms at
/// positive index, sorted, with a positive leading coefficient.
pub fn canonical_key(rec: &SolutionRecord) -> (u64, Vec<(u32, i64)>) {
    let mut terms: Vec<(u32, i64)> = rec
        .indices
        .iter()
        .zip(&rec.coefficients)
        .filter(|(&m, &c)| m > 0 && c != 0)
        .map(|(&m, &c)| (m, c))
        .collect();
    terms.sort_by(|a, b| b.cmp(a));
    if terms.first().is_some_and(|t| t.1 < 0) {
        for t in &mut terms {
            t.1 = -t.1;
        }
        terms.sort_by(|a, b| b.cmp(a));
    }
    (rec.a, terms)
}

/// Keeps the first record (in sorted order) of each canonical class.
pub fn dedup_canonical(sorted: Vec<SolutionRecord>) -> Vec<SolutionRecord> {
    let mut seen = HashSet::new();
    sorted
        .into_iter()
        .filter(|r| seen.insert(canonical_key(r)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproReport {
    pub bounds: BoundSet,
    /// Distinct relations found, one representative each.
    pub records: Vec<SolutionRecord>,
    /// Hits before canonical deduplication.
    pub raw_hits: usize,
    pub reference_found: bool,
}

/// Sweeps `A` in `[3, 308]` and every unit pattern under the `X = 1` caps.
pub fn reproduce_example(strict: bool) -> Result<ReproReport> {
    let bounds = BoundSet::for_size(1)?;
    let raw = search_equations(&unit_patterns(), &bounds, 3..=bounds.a_cap, strict)?;
    let raw_hits = raw.len();
    let records = dedup_canonical(raw);
    let reference = reference_hit();
    let reference_found = records.contains(&reference);
    Ok(ReproReport {
        bounds,
        records,
        raw_hits,
        reference_found,
    })
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    pool.install(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(c: [i64; 6]) -> NormalizedEquation {
        NormalizedEquation::new(c, 1).unwrap()
    }

    #[test]
    fn five_ones_at_a_five() {
        let b = BoundSet::for_size(1).unwrap();
        let hits = find_sporadic(5, &eq([1, -1, -1, -1, -1, -1]), &b).unwrap();
        assert!(hits.contains(&reference_hit()));
        assert!(hits.iter().all(|r| r.verify().unwrap()));
    }

    #[test]
    fn three_ones_at_a_three() {
        let b = BoundSet::for_size(1).unwrap();
        let hits = find_sporadic(3, &eq([1, -1, -1, -1, 0, 0]), &b).unwrap();
        assert!(hits.iter().any(|r| r.indices[..4] == [2, 1, 1, 1]));
    }

    #[test]
    fn no_equal_terms() {
        let b = BoundSet::for_size(1).unwrap();
        assert!(find_sporadic(7, &eq([1, -1, 0, 0, 0, 0]), &b)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn out_of_range() {
        let b = BoundSet::for_size(1).unwrap();
        assert!(find_sporadic(309, &eq([1; 6]), &b).is_err());
        assert!(find_sporadic(2, &eq([1; 6]), &b).is_err());
        assert!(matches!(
            search_all(&eq([1, -1, -1, -1, -1, -1]), Some(400..=500)),
            Err(Error::RangeOutsideCap { .. })
        ));
    }

    #[test]
    fn triple_loop_oracle_at_a_seven() {
        let e = eq([1, -1, -1, 0, 0, 0]);
        let got = search_all(&e, Some(7..=7)).unwrap();
        let caps = BoundSet::for_size(1).unwrap().sporadic;
        let t = Table::build(SequenceParams::new(7).unwrap(), caps[0] as usize).unwrap();
        let x = t.x();
        let mut expected = Vec::new();
        for m1 in 0..=caps[0] as usize {
            for m2 in 0..m1.min(caps[1] as usize + 1) {
                for m3 in 0..=m2.min(caps[2] as usize) {
                    if x[m1] == &x[m2] + &x[m3] {
                        expected.push((m1, m2, m3));
                    }
                }
            }
        }
        let mut got_triples: Vec<_> = got
            .iter()
            .map(|r| {
                (
                    r.indices[0] as usize,
                    r.indices[1] as usize,
                    r.indices[2] as usize,
                )
            })
            .collect();
        got_triples.sort();
        got_triples.dedup();
        expected.sort();
        assert_eq!(got_triples, expected);
        // x[m1] = x[m2] + x[m3] needs x[m1] <= 2 x[m2] < x[m2 + 1] for A = 7
        assert!(expected.is_empty());
    }

    #[test]
    fn width_selection() {
        let small = Table::build(SequenceParams::new(3).unwrap(), 20).unwrap();
        assert_eq!(width_for(&small, 6), Width::I64);
        let mid = Table::build(SequenceParams::new(30).unwrap(), 20).unwrap();
        assert_eq!(width_for(&mid, 6), Width::I128);
        let big = Table::build(SequenceParams::new(308).unwrap(), 26).unwrap();
        assert_eq!(width_for(&big, 6), Width::Big);
    }

    #[test]
    fn widths_agree() {
        let caps = [12, 11, 9, 7, 5, 2];
        for a in [3u64, 4, 5] {
            let tables = ShardTables::build(a, 12).unwrap();
            for c in [
                [1, -1, -1, -1, -1, -1],
                [2, -1, -3, 1, 0, 2],
                [-1, 2, 2, -2, 1, 1],
            ] {
                let mut a64 = Vec::new();
                let mut a128 = Vec::new();
                let mut big = Vec::new();
                scan(tables.narrow64.as_ref().unwrap(), &c, &caps, &mut a64).unwrap();
                scan(tables.narrow128.as_ref().unwrap(), &c, &caps, &mut a128).unwrap();
                scan(&tables.big, &c, &caps, &mut big).unwrap();
                assert_eq!(a64, big);
                assert_eq!(a128, big);
            }
        }
    }

    #[test]
    fn tuple_count_matches_enumeration() {
        for caps in [
            [26u32, 23, 17, 12, 7, 2],
            [8; 6],
            [5, 9, 9, 1, 3, 2],
            [0; 6],
            [1; 6],
        ] {
            let top = caps[0].saturating_sub(1);
            let e: Vec<u32> = caps[1..].iter().map(|&c| c.min(top)).collect();
            let mut n = 0u128;
            if caps[0] > 0 {
                for m6 in 0..=e[4] {
                    for m5 in m6..=e[3] {
                        for m4 in m5..=e[2] {
                            for m3 in m4..=e[1] {
                                for _m2 in m3..=e[0] {
                                    n += 1;
                                }
                            }
                        }
                    }
                }
            }
            assert_eq!(index_tuple_count(&caps), n, "{caps:?}");
        }
        assert_eq!(index_tuple_count(&[26, 23, 17, 12, 7, 2]), 23526);
    }

    #[test]
    fn patterns() {
        let p = unit_patterns();
        assert_eq!(p.len(), 243);
        assert!(p.contains(&[1, -1, -1, -1, -1, -1]));
        assert!(p.contains(&[1, 0, 0, 0, 0, 0]));
        assert!(p.iter().all(|c| c[0] == 1));
    }

    #[test]
    fn canonical_keys() {
        let a = SolutionRecord {
            a: 3,
            indices: [2, 1, 1, 1, 0, 0],
            coefficients: [1, -1, -1, -1, 0, 0],
            residual_check: true,
        };
        let b = SolutionRecord {
            a: 3,
            indices: [2, 1, 1, 1, 1, 1],
            coefficients: [1, -1, 0, -1, -1, 0],
            residual_check: true,
        };
        let c = SolutionRecord {
            coefficients: [-1, 1, 0, 1, 1, 0],
            ..b.clone()
        };
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert_eq!(canonical_key(&b), canonical_key(&c));
        let kept = dedup_canonical(vec![a.clone(), b, c]);
        assert_eq!(kept, vec![a]);
    }

    #[test]
    fn strict_filter() {
        let t = Table::build(SequenceParams::new(5).unwrap(), 5).unwrap();
        assert!(!is_strict_original_form(&reference_hit(), &t).unwrap());
        let rec = SolutionRecord {
            a: 5,
            indices: [5, 4, 3, 2, 1, 0],
            coefficients: [1, -1, 0, -1, 1, 0],
            residual_check: true,
        };
        assert!(is_strict_original_form(&rec, &t).unwrap());
    }

    #[test]
    fn record_verification_rejects_tampering() {
        let mut r = reference_hit();
        assert!(r.verify().unwrap());
        r.indices[0] = 3;
        assert!(!r.verify().unwrap());
        let mut r = reference_hit();
        r.indices = [1, 2, 1, 1, 1, 1];
        assert!(!r.verify().unwrap());
    }
}
