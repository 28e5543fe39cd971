use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::BigRational;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::series::work::IntVec;
use crate::series::TruncatedSeries;

/// Symbolic product `prod eta(d tau)^(r_d)`.
///
/// Terms keep their insertion order (for display) with repeated scales
/// merged and zero powers dropped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EtaQuotient {
    terms: Vec<(u64, i64)>,
}

impl EtaQuotient {
    pub fn new(terms: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut q = EtaQuotient::default();
        for (d, r) in terms {
            q.push(d, r);
        }
        q
    }

    fn push(&mut self, d: u64, r: i64) {
        assert!(d > 0, "eta scale must be positive");
        match self.terms.iter_mut().find(|t| t.0 == d) {
            Some(t) => t.1 += r,
            None => self.terms.push((d, r)),
        }
        self.terms.retain(|t| t.1 != 0);
    }

    pub fn terms(&self) -> &[(u64, i64)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Twice the weight, `sum r_d`.
    pub fn twice_weight(&self) -> i64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn weight(&self) -> BigRational {
        BigRational::new(BigInt::from(self.twice_weight()), BigInt::from(2))
    }

    /// `sum d r_d`, i.e. 24 times the leading exponent.
    pub fn order_times_24(&self) -> i64 {
        self.terms.iter().map(|&(d, r)| d as i64 * r).sum()
    }

    pub fn leading_exponent(&self) -> Result<i64> {
        let n = self.order_times_24();
        if n % 24 != 0 {
            return Err(Error::FractionalPower { numerator: n });
        }
        Ok(n / 24)
    }

    /// Least common multiple of the scales.
    pub fn level(&self) -> u64 {
        self.terms.iter().fold(1, |acc, t| acc.lcm(&t.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut q = self.clone();
        for &(d, r) in &other.terms {
            q.push(d, r);
        }
        q
    }

    pub fn pow(&self, e: i64) -> Self {
        EtaQuotient::new(self.terms.iter().map(|&(d, r)| (d, r * e)))
    }

    /// `tau -> m tau`.
    pub fn rescale(&self, m: u64) -> Self {
        EtaQuotient::new(self.terms.iter().map(|&(d, r)| (d * m, r)))
    }

    /// Exact expansion on `[leading exponent, bound)`.
    pub fn expand(&self, bound: i64) -> Result<TruncatedSeries> {
        let start = self.leading_exponent()?;
        if bound <= start {
            return Ok(TruncatedSeries::zero_to(bound));
        }
        // Only exponents start + g k occur, g the gcd of the scales; expand
        // in q^g and spread out afterwards.
        let g = self.terms.iter().fold(0u64, |acc, t| acc.gcd(&t.0)).max(1);
        let len = ((bound - start) as u64).div_ceil(g) as usize;
        let mut v = IntVec::one(len);
        for &(d, r) in &self.terms {
            let d = (d / g) as usize;
            for _ in 0..r.unsigned_abs() {
                if r > 0 {
                    v.mul_euler(d);
                } else {
                    v.div_euler(d);
                }
            }
        }
        let coarse = TruncatedSeries::from_integers(0, Some(len as i64), v.into_bigints());
        Ok(coarse.rescale(g).shift(start).truncate(bound))
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "1");
        }
        for (i, (d, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "eta({d}t)^{r}")?;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// Parses `eta(2t)^1 * eta(1t)^-2`; `1` or the empty string is the
    /// empty quotient.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(EtaQuotient::default());
        }
        let bad = |part: &str| Error::Parse(format!("bad eta factor {part:?}"));
        let mut q = EtaQuotient::default();
        for part in s.split('*') {
            let part = part.trim();
            let inner = part.strip_prefix("eta(").ok_or_else(|| bad(part))?;
            let (scale, rest) = inner.split_once("t)").ok_or_else(|| bad(part))?;
            let d: u64 = scale.trim().parse().map_err(|_| bad(part))?;
            if d == 0 {
                return Err(bad(part));
            }
            let r: i64 = match rest.trim() {
                "" => 1,
                p => p.strip_prefix('^').ok_or_else(|| bad(part))?.trim().parse().map_err(|_| bad(part))?,
            };
            q.push(d, r);
        }
        Ok(q)
    }
}
