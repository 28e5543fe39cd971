//! Smallest-parts generating functions and brute-force enumeration oracles.
//!
//! The generating functions are bilateral sums of rational functions in `q`
//! times an eta-type product. Each term with `n < 0` is rewritten with
//! `1 - q^-a = -q^-a (1 - q^a)` into an ordinary power series whose lowest
//! exponent grows quadratically in `|n|`, so the sum is cut off once that
//! floor passes the requested bound.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{eisenstein, NamedForm};
use crate::series::work::{rational_term, IntVec};
use crate::series::TruncatedSeries;

/// Largest `n` accepted by the enumeration oracles.
pub const ORACLE_CEILING: i64 = 40;

/// Generating function of overpartitions, `eta(2t) / eta(t)^2`.
pub fn pbar_series(bound: i64) -> Result<TruncatedSeries> {
    NamedForm::Pbar.expand(bound)
}

/// Sums `term(n)` for `n = 1, -1, 2, -2, ...` until both signs start at or
/// beyond `len`.
fn bilateral(len: usize, acc: &mut IntVec, term: impl Fn(i64) -> Option<IntVec>) {
    for m in 1i64.. {
        let pos = term(m);
        let neg = term(-m);
        let done = pos.is_none() && neg.is_none();
        for t in [pos, neg].into_iter().flatten() {
            acc.add_shifted(&t, 0, 1);
        }
        if done && m > 3 {
            break;
        }
    }
    debug_assert_eq!(acc.len(), len);
}

fn sign(n: i64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `sum spt(n) q^n` over all partitions, as
/// `(1/(q)_inf) [sum n q^n/(1-q^n) + sum_{n>=1} (-1)^n q^(n(3n+1)/2) (1+q^n)/(1-q^n)^2]`.
pub fn spt_series(bound: i64) -> Result<TruncatedSeries> {
    let len = bound.max(0) as usize;
    let mut acc = IntVec::zeros(len);
    // sum n q^n / (1 - q^n): coefficient sigma_1
    let sigma: Vec<i128> = divisor_weighted(len, |d, _| d as i128);
    acc.add_shifted(&IntVec::Small(sigma), 0, 1);
    for n in 1i64.. {
        let shift = n * (3 * n + 1) / 2;
        match rational_term(len, sign(n), shift, &[(1, 0), (1, n)], &[(n, 2)]) {
            Some(t) => acc.add_shifted(&t, 0, 1),
            None => break,
        }
    }
    acc.div_euler(1);
    Ok(TruncatedSeries::from_integers(0, Some(bound), acc.into_bigints()))
}

/// `sum_{d | m} weight(d, m / d)` for every `m < len`.
fn divisor_weighted(len: usize, weight: impl Fn(usize, usize) -> i128) -> Vec<i128> {
    let mut out = vec![0i128; len];
    for d in 1..len {
        for k in 1..=(len - 1) / d {
            out[d * k] += weight(d, k);
        }
    }
    out
}

/// `sum sptbar(n) q^n`, smallest parts of overpartitions with odd smallest
/// part.
pub fn sptbar_series(bound: i64) -> Result<TruncatedSeries> {
    let len = bound.max(0) as usize;
    let mut acc = IntVec::zeros(len);
    // sum 2n q^n / (1 - q^(2n)) = sum over n, odd k of 2n q^(nk)
    let first = divisor_weighted(len, |d, k| if k % 2 == 1 { 2 * d as i128 } else { 0 });
    acc.add_shifted(&IntVec::Small(first), 0, 1);
    bilateral(len, &mut acc, |n| {
        rational_term(len, 4 * sign(n), n * n + n, &[(1, 0), (1, 2 * n), (1, 3 * n)], &[(2 * n, 1), (4 * n, 1)])
    });
    // prod (1 + q^n) / (1 - q^n) = (q^2; q^2) / (q; q)^2
    acc.mul_euler(2);
    acc.div_euler(1);
    acc.div_euler(1);
    Ok(TruncatedSeries::from_integers(0, Some(bound), acc.into_bigints()))
}

/// `sum M2spt(n) q^n`, partitions without repeated odd parts and even
/// smallest part.
pub fn m2spt_series(bound: i64) -> Result<TruncatedSeries> {
    let len = bound.max(0) as usize;
    let mut acc = IntVec::zeros(len);
    // sum n q^(2n) / (1 - q^(2n)): sigma_1(m) at q^(2m)
    let first = divisor_weighted(len.div_ceil(2), |d, _| d as i128);
    let mut spread = vec![0i128; len];
    for (m, c) in first.into_iter().enumerate() {
        spread[2 * m] = c;
    }
    acc.add_shifted(&IntVec::Small(spread), 0, 1);
    bilateral(len, &mut acc, |n| rational_term(len, sign(n), 2 * n * n + n, &[(1, 0)], &[(2 * n, 2)]));
    // prod (1 + q^(2n-1)) / (1 - q^(2n)) = (q^2; q^2) / ((q; q) (q^4; q^4))
    acc.mul_euler(2);
    acc.div_euler(1);
    acc.div_euler(4);
    Ok(TruncatedSeries::from_integers(0, Some(bound), acc.into_bigints()))
}

/// `S2 = sum (-1)^n M2spt(n) q^(8n-1)`.
pub fn s2_series(bound: i64) -> Result<TruncatedSeries> {
    let inner = m2spt_series((bound + 1).div_euclid(8) + 1)?;
    let twisted = inner.map_weighted(|n| BigInt::from(sign(n)));
    Ok(twisted.rescale(8).shift(-1).truncate(bound))
}

/// `Mbar = Sbar + (1/12) Pbar (E_2(t) - 4 E_2(2t))`.
pub fn mbar_series(bound: i64) -> Result<TruncatedSeries> {
    let e2 = eisenstein(2, bound)?;
    let e2_2 = eisenstein(2, bound.div_euclid(2) + 1)?.rescale(2);
    let diff = e2.sub(&e2_2.scale_int(4))?;
    let correction = pbar_series(bound)?.mul(&diff).scale(&BigRational::new(BigInt::one(), BigInt::from(12)));
    Ok(sptbar_series(bound)?.add(&correction)?.truncate(bound))
}

/// `M2 = S2 + (1/24) R (E_2(16t) - E_2(8t))`.
pub fn m2_series(bound: i64) -> Result<TruncatedSeries> {
    let e16 = eisenstein(2, (bound + 1).div_euclid(16) + 1)?.rescale(16);
    let e8 = eisenstein(2, (bound + 1).div_euclid(8) + 1)?.rescale(8);
    let diff = e16.sub(&e8)?;
    let correction =
        NamedForm::R.expand(bound)?.mul(&diff).scale(&BigRational::new(BigInt::one(), BigInt::from(24)));
    Ok(s2_series(bound)?.add(&correction)?.truncate(bound))
}

/// Series-valued statistics usable inside form expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Statistic {
    Sptbar,
    Spt,
    M2spt,
    S2,
    Mbar,
    M2,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Sptbar => "sptbar",
            Statistic::Spt => "spt",
            Statistic::M2spt => "m2spt",
            Statistic::S2 => "S2",
            Statistic::Mbar => "Mbar",
            Statistic::M2 => "M2",
        }
    }

    pub fn valuation(self) -> i64 {
        match self {
            Statistic::Sptbar | Statistic::Spt => 1,
            Statistic::M2spt => 2,
            Statistic::S2 => 15,
            Statistic::Mbar => 0,
            Statistic::M2 => 7,
        }
    }

    pub fn series(self, bound: i64) -> Result<TruncatedSeries> {
        match self {
            Statistic::Sptbar => sptbar_series(bound),
            Statistic::Spt => spt_series(bound),
            Statistic::M2spt => m2spt_series(bound),
            Statistic::S2 => s2_series(bound),
            Statistic::Mbar => mbar_series(bound),
            Statistic::M2 => m2_series(bound),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Integer sequences indexed by `n` that can be exported as tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartitionStatistic {
    Pbar,
    Spt,
    Sptbar,
    M2spt,
    /// Partitions without repeated odd parts (`|coefficient|` of `R`).
    NoRepeatedOdd,
}

impl PartitionStatistic {
    pub const ALL: [PartitionStatistic; 5] = [
        PartitionStatistic::Pbar,
        PartitionStatistic::Spt,
        PartitionStatistic::Sptbar,
        PartitionStatistic::M2spt,
        PartitionStatistic::NoRepeatedOdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PartitionStatistic::Pbar => "pbar",
            PartitionStatistic::Spt => "spt",
            PartitionStatistic::Sptbar => "sptbar",
            PartitionStatistic::M2spt => "m2spt",
            PartitionStatistic::NoRepeatedOdd => "mbar_m",
        }
    }

    /// Values for `n = 0..=n_max` from the generating function.
    pub fn values(self, n_max: i64) -> Result<Vec<BigInt>> {
        let bound = n_max + 1;
        let s = match self {
            PartitionStatistic::Pbar => pbar_series(bound)?,
            PartitionStatistic::Spt => spt_series(bound)?,
            PartitionStatistic::Sptbar => sptbar_series(bound)?,
            PartitionStatistic::M2spt => m2spt_series(bound)?,
            PartitionStatistic::NoRepeatedOdd => {
                let r = NamedForm::R.expand(8 * bound)?;
                return (0..bound).map(|n| Ok(r.integer_at(8 * n - 1)? * sign(n))).collect();
            }
        };
        (0..bound).map(|n| s.integer_at(n)).collect()
    }

    /// `n,value` table for `n = 0..=n_max`.
    pub fn csv(self, n_max: i64) -> Result<String> {
        let mut out = String::from("n,value\n");
        for (n, v) in self.values(n_max)?.iter().enumerate() {
            out.push_str(&format!("{n},{v}\n"));
        }
        Ok(out)
    }

    /// Exhaustive count by enumeration.
    pub fn oracle(self, n: i64) -> Result<BigInt> {
        match self {
            PartitionStatistic::Pbar => pbar_oracle(n),
            PartitionStatistic::Spt => spt_oracle(n),
            PartitionStatistic::Sptbar => sptbar_oracle(n),
            PartitionStatistic::M2spt => m2spt_oracle(n),
            PartitionStatistic::NoRepeatedOdd => oracle_sum(n, |p| u64::from(!has_repeated_odd(p))),
        }
    }
}

impl FromStr for PartitionStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartitionStatistic::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownForm(s.to_string()))
    }
}

/// Calls `visit` on every partition of `n` as a non-increasing part list.
fn for_each_partition(n: u32, visit: &mut impl FnMut(&[u32])) {
    fn go(remaining: u32, max_part: u32, parts: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if remaining == 0 {
            visit(parts);
            return;
        }
        for p in (1..=max_part.min(remaining)).rev() {
            parts.push(p);
            go(remaining - p, p, parts, visit);
            parts.pop();
        }
    }
    go(n, n, &mut Vec::new(), visit);
}

fn oracle_sum(n: i64, weight: impl Fn(&[u32]) -> u64) -> Result<BigInt> {
    if n > ORACLE_CEILING {
        return Err(Error::OracleScaleExceeded { n, ceiling: ORACLE_CEILING });
    }
    if n < 0 {
        return Ok(BigInt::zero());
    }
    let mut total: u64 = 0;
    for_each_partition(n as u32, &mut |p| total += weight(p));
    Ok(BigInt::from(total))
}

fn distinct_parts(p: &[u32]) -> u32 {
    let mut count = 0;
    for (i, x) in p.iter().enumerate() {
        if i == 0 || p[i - 1] != *x {
            count += 1;
        }
    }
    count
}

/// `(smallest part, its multiplicity)`; `None` for the empty partition.
fn smallest(p: &[u32]) -> Option<(u32, u64)> {
    let s = *p.last()?;
    Some((s, p.iter().filter(|&&x| x == s).count() as u64))
}

fn has_repeated_odd(p: &[u32]) -> bool {
    p.windows(2).any(|w| w[0] == w[1] && w[0] % 2 == 1)
}

/// Overpartitions of `n`: each partition with `k` distinct part sizes
/// contributes `2^k` overlinings.
pub fn pbar_oracle(n: i64) -> Result<BigInt> {
    oracle_sum(n, |p| 1 << distinct_parts(p))
}

/// Smallest parts (overlined or not) over overpartitions with odd smallest
/// part.
pub fn sptbar_oracle(n: i64) -> Result<BigInt> {
    oracle_sum(n, |p| match smallest(p) {
        Some((s, m)) if s % 2 == 1 => m << distinct_parts(p),
        _ => 0,
    })
}

/// Smallest parts over partitions with no repeated odd part and even
/// smallest part.
pub fn m2spt_oracle(n: i64) -> Result<BigInt> {
    oracle_sum(n, |p| match smallest(p) {
        Some((s, m)) if s % 2 == 0 && !has_repeated_odd(p) => m,
        _ => 0,
    })
}

/// Smallest parts over all partitions.
pub fn spt_oracle(n: i64) -> Result<BigInt> {
    oracle_sum(n, |p| smallest(p).map_or(0, |(_, m)| m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries, range: std::ops::Range<i64>) -> Vec<i64> {
        range.map(|n| i64::try_from(s.integer_at(n).unwrap()).unwrap()).collect()
    }

    #[test]
    fn printed_expansions() {
        assert_eq!(ints(&pbar_series(6).unwrap(), 0..6), [1, 2, 4, 8, 14, 24]);
        assert_eq!(ints(&sptbar_series(6).unwrap(), 0..6), [0, 2, 4, 12, 20, 40]);
        assert_eq!(ints(&m2spt_series(8).unwrap(), 0..8), [0, 0, 1, 0, 3, 1, 5, 3]);
        assert_eq!(spt_series(6).unwrap().integer_at(5).unwrap(), BigInt::from(14));
        assert_eq!(spt_series(6).unwrap().integer_at(1).unwrap(), BigInt::from(1));
    }

    #[test]
    fn printed_worked_examples() {
        assert_eq!(pbar_oracle(3).unwrap(), BigInt::from(8));
        assert_eq!(sptbar_oracle(4).unwrap(), BigInt::from(20));
        assert_eq!(m2spt_oracle(7).unwrap(), BigInt::from(3));
        assert_eq!(spt_oracle(5).unwrap(), BigInt::from(14));
        assert_eq!(pbar_oracle(0).unwrap(), BigInt::from(1));
        assert_eq!(spt_oracle(41), Err(Error::OracleScaleExceeded { n: 41, ceiling: 40 }));
    }

    #[test]
    fn series_agree_with_oracles() {
        for stat in PartitionStatistic::ALL {
            let values = stat.values(30).unwrap();
            for (n, v) in values.iter().enumerate() {
                assert_eq!(*v, stat.oracle(n as i64).unwrap(), "{} at {n}", stat.name());
            }
        }
    }

    #[test]
    fn s2_signs_and_exponents() {
        let s2 = s2_series(60).unwrap();
        let want = [(15, 1), (31, 3), (39, -1), (47, 5), (55, -3)];
        assert_eq!(s2.terms().map(|(e, c)| (e, i64::try_from(c.to_integer()).unwrap())).collect::<Vec<_>>(), want);
    }

    #[test]
    fn corrected_series_leading_terms() {
        let mbar = mbar_series(10).unwrap();
        assert_eq!(mbar.coeff_at(0).unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(4)));
        assert_eq!(mbar.coeff_at(1).unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(2)));
        let m2 = m2_series(100).unwrap();
        assert_eq!(m2.valuation(), 7);
        assert_eq!(m2.coeff_at(7).unwrap(), BigRational::one());
        assert_eq!(m2.bound(), Some(100));
    }

    #[test]
    fn sptbar_is_even_and_denominators_are_small() {
        let s = sptbar_series(2001).unwrap();
        assert!(s.is_integral());
        assert!(s.numerators().iter().all(|c| c % 2 == BigInt::zero()));
        let mbar = mbar_series(2000).unwrap();
        assert!((BigInt::from(4) % mbar.denominator()).is_zero());
        let m2 = m2_series(4000).unwrap();
        assert!((BigInt::from(24) % m2.denominator()).is_zero());
        assert!(s2_series(4000).unwrap().is_integral());
    }

    #[test]
    fn csv_table() {
        assert_eq!(PartitionStatistic::Pbar.csv(3).unwrap(), "n,value\n0,1\n1,2\n2,4\n3,8\n");
        assert_eq!(PartitionStatistic::NoRepeatedOdd.values(4).unwrap(), [1, 1, 1, 2, 3].map(BigInt::from));
    }
}
