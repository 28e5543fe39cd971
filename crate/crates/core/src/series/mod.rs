//! Exact truncated Laurent series in `q`.
//!
//! A [`TruncatedSeries`] stores its coefficients as integer numerators over
//! one common positive denominator, densely from the valuation upward, and
//! carries an explicit exclusive `bound`: every coefficient below the bound
//! is exact, and reading at or above the bound is an error rather than a
//! silent zero. A series without a bound is *exact*, i.e. a Laurent
//! polynomial known to all orders.
//!
//! Values are canonical: the valuation is the first nonzero exponent,
//! trailing zeros are dropped, and the numerators share no factor with the
//! denominator. Structural equality is therefore mathematical equality on
//! identical windows.

mod io;
pub(crate) mod kernel;
pub(crate) mod work;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numthy::reduce_mod;

pub use io::SeriesJson;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    valuation: i64,
    bound: Option<i64>,
    den: BigInt,
    coeffs: Vec<BigInt>,
}

/// Smallest exponent at which two series disagree modulo `m`, with both
/// residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

/// Outcome of a coefficientwise congruence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub modulus: BigInt,
    /// Exclusive upper end of the checked exponents (`None` for exact inputs).
    pub bound: Option<i64>,
    pub first_failure: Option<Mismatch>,
}

impl Congruence {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none()
    }
}

fn min_bound(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl TruncatedSeries {
    fn from_parts(valuation: i64, bound: Option<i64>, mut den: BigInt, mut coeffs: Vec<BigInt>) -> Self {
        if let Some(b) = bound {
            let keep = (b - valuation).max(0) as usize;
            coeffs.truncate(keep);
        }
        let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
            return Self::empty(bound);
        };
        coeffs.drain(..first);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if den.is_negative() {
            den = -den;
            for c in coeffs.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &coeffs {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                den /= &g;
                for c in coeffs.iter_mut() {
                    *c /= &g;
                }
            }
        }
        TruncatedSeries { valuation: valuation + first as i64, bound, den, coeffs }
    }

    fn empty(bound: Option<i64>) -> Self {
        TruncatedSeries { valuation: bound.unwrap_or(0), bound, den: BigInt::one(), coeffs: Vec::new() }
    }

    /// The exact zero series, valid on every window.
    pub fn zero() -> Self {
        Self::empty(None)
    }

    /// `O(q^bound)`.
    pub fn zero_to(bound: i64) -> Self {
        Self::empty(Some(bound))
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// Exact monomial `c q^e`.
    pub fn monomial(c: BigRational, e: i64) -> Self {
        Self::from_parts(e, None, c.denom().clone(), vec![c.numer().clone()])
    }

    /// Builds a series from integer coefficients starting at `start`.
    pub fn from_integers(start: i64, bound: Option<i64>, coeffs: Vec<BigInt>) -> Self {
        Self::from_parts(start, bound, BigInt::one(), coeffs)
    }

    /// Integer numerators over a common denominator, starting at `start`.
    pub fn from_numerators(start: i64, bound: Option<i64>, den: BigInt, coeffs: Vec<BigInt>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::from_parts(start, bound, den, coeffs)
    }

    pub fn from_rationals(start: i64, bound: Option<i64>, coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::from_parts(start, bound, den, nums)
    }

    /// Sparse construction from `(exponent, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms(bound: Option<i64>, terms: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        let terms: Vec<(i64, BigRational)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::empty(bound);
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(lo);
        let mut dense = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            dense[(e - lo) as usize] += c;
        }
        Self::from_rationals(lo, bound, &dense)
    }

    /// Integer coefficients `f(n)` for `n` in `[start, bound)`.
    pub fn from_fn(start: i64, bound: i64, f: impl Fn(i64) -> BigInt) -> Self {
        Self::from_integers(start, Some(bound), (start..bound).map(f).collect())
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn bound(&self) -> Option<i64> {
        self.bound
    }

    pub fn is_exact(&self) -> bool {
        self.bound.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Numerators from the valuation upward (trailing zeros omitted).
    pub fn numerators(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// One past the largest stored exponent (for exact series) or the bound.
    pub fn end(&self) -> i64 {
        self.bound.unwrap_or(self.valuation + self.coeffs.len() as i64)
    }

    /// Count of nonzero stored coefficients.
    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn check_window(&self, n: i64) -> Result<()> {
        match self.bound {
            Some(b) if n >= b => Err(Error::NotComputed { exponent: n, bound: b }),
            _ => Ok(()),
        }
    }

    fn raw(&self, n: i64) -> Option<&BigInt> {
        if n < self.valuation {
            return None;
        }
        self.coeffs.get((n - self.valuation) as usize)
    }

    /// Numerator of the coefficient at `n` over [`denominator`](Self::denominator),
    /// without a window check.
    pub(crate) fn numerator_at(&self, n: i64) -> BigInt {
        self.raw(n).cloned().unwrap_or_default()
    }

    /// Exact coefficient of `q^n`. Exponents below the valuation read as
    /// zero; exponents at or beyond the bound are an error.
    pub fn coeff_at(&self, n: i64) -> Result<BigRational> {
        self.check_window(n)?;
        Ok(match self.raw(n) {
            Some(c) => BigRational::new(c.clone(), self.den.clone()),
            None => BigRational::zero(),
        })
    }

    /// Coefficient of `q^n` as an integer; fails if it is not integral.
    pub fn integer_at(&self, n: i64) -> Result<BigInt> {
        let c = self.coeff_at(n)?;
        if c.is_integer() {
            Ok(c.to_integer())
        } else {
            Err(Error::InvalidArgument(format!("coefficient of q^{n} is {c}, not an integer")))
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.valuation + i as i64, BigRational::new(c.clone(), self.den.clone())))
    }

    /// Restricts the window to exponents below `bound`.
    pub fn truncate(&self, bound: i64) -> Self {
        let b = min_bound(self.bound, Some(bound));
        Self::from_parts(self.valuation, b, self.den.clone(), self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Result<Self> {
        if other.is_zero() && other.is_exact() {
            return Ok(self.clone());
        }
        if self.is_zero() && self.is_exact() {
            return Ok(if negate_other { -other } else { other.clone() });
        }
        let bound = min_bound(self.bound, other.bound);
        let lowest_nonzero = [self, other].iter().filter(|s| !s.is_zero()).map(|s| s.valuation).min();
        if let (Some(b), Some(v)) = (bound, lowest_nonzero) {
            if b <= v {
                return Err(Error::NoCommonWindow);
            }
        }
        let start = self.valuation.min(other.valuation);
        let end = match bound {
            Some(b) => b.min(self.end().max(other.end())),
            None => self.end().max(other.end()),
        };
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let mut out = Vec::with_capacity((end - start).max(0) as usize);
        for n in start..end {
            let mut c = match self.raw(n) {
                Some(x) if !x.is_zero() => x * &fa,
                _ => BigInt::zero(),
            };
            if let Some(y) = other.raw(n) {
                if !y.is_zero() {
                    if negate_other {
                        c -= y * &fb;
                    } else {
                        c += y * &fb;
                    }
                }
            }
            out.push(c);
        }
        Ok(Self::from_parts(start, bound, den, out))
    }

    /// Cauchy product on the largest provably exact window.
    pub fn mul(&self, other: &Self) -> Self {
        if (self.is_zero() && self.is_exact()) || (other.is_zero() && other.is_exact()) {
            return Self::zero();
        }
        let valuation = self.valuation + other.valuation;
        let bound = min_bound(
            self.bound.map(|b| b + other.valuation),
            other.bound.map(|b| b + self.valuation),
        );
        if self.is_zero() || other.is_zero() {
            return Self::empty(bound);
        }
        let len = match bound {
            Some(b) => (b - valuation).max(0) as usize,
            None => self.coeffs.len() + other.coeffs.len() - 1,
        };
        let coeffs = kernel::convolve(&self.coeffs, &other.coeffs, len);
        Self::from_parts(valuation, bound, &self.den * &other.den, coeffs)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return match self.bound {
                Some(b) => Self::zero_to(b),
                None => Self::zero(),
            };
        }
        let coeffs = self.coeffs.iter().map(|x| x * c.numer()).collect();
        Self::from_parts(self.valuation, self.bound, &self.den * c.denom(), coeffs)
    }

    pub fn scale_int(&self, c: impl Into<BigInt>) -> Self {
        self.scale(&BigRational::from_integer(c.into()))
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncatedSeries {
            valuation: self.valuation + k,
            bound: self.bound.map(|b| b + k),
            den: self.den.clone(),
            coeffs: self.coeffs.clone(),
        }
    }

    /// Multiplicative inverse on the relative precision of `self`.
    pub fn invert(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// `self / other`; the leading coefficient of `other` must be nonzero.
    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::NonUnit);
        }
        let valuation = self.valuation - other.valuation;
        if other.is_exact() && other.coeffs.len() == 1 {
            // Division by a monomial is exact.
            let c = BigRational::new(other.den.clone(), other.coeffs[0].clone());
            let shifted = self.shift(-other.valuation);
            return Ok(shifted.scale(&c));
        }
        if other.is_exact() {
            return Err(Error::InvalidArgument(
                "dividing by an exact polynomial needs a bound; truncate it first".into(),
            ));
        }
        if self.is_zero() {
            // O(q^b) / g is O(q^(b - v(g))).
            return Ok(match self.bound {
                Some(b) => Self::empty(Some(b - other.valuation)),
                None => Self::zero(),
            });
        }
        let rel_other = other.end() - other.valuation;
        let rel = match self.bound {
            Some(b) => (b - self.valuation).min(rel_other),
            None => rel_other,
        };
        let bound = valuation + rel;
        let len = rel.max(0) as usize;
        let (nums, extra_den) = if other.coeffs[0].magnitude().is_one() {
            (kernel::divide_unit(&self.coeffs, &other.coeffs, len), BigInt::one())
        } else {
            kernel::divide_general(&self.coeffs, &other.coeffs, len)
        };
        // (A/da) / (B/db) = (db * (A/B)) / da
        let nums = if other.den.is_one() { nums } else { nums.into_iter().map(|x| x * &other.den).collect() };
        Ok(Self::from_parts(valuation, Some(bound), &self.den * extra_den, nums))
    }

    /// Integer power. Truncated bases with a unit leading numerator use a
    /// linear recurrence when sparse or when `e < 0`; otherwise negative
    /// exponents go through [`invert`](Self::invert) and positive ones
    /// through products.
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one());
        }
        let rel = (self.end() - self.valuation).max(1);
        let sparse = (self.nonzero_count() as f64) <= 2.0 * (rel as f64).sqrt() + 8.0;
        if let (Some(b), false) = (self.bound, self.is_zero()) {
            if self.coeffs[0].magnitude().is_one() && (sparse || e < 0) && e != 1 {
                let nums = kernel::power_unit(&self.coeffs, e, (b - self.valuation).max(0) as usize);
                let (nums, den) = if e > 0 {
                    (nums, self.den.pow(e as u32))
                } else {
                    let scale = self.den.pow((-e) as u32);
                    (nums.into_iter().map(|x| x * &scale).collect(), BigInt::one())
                };
                let valuation = self.valuation * e;
                return Ok(Self::from_parts(valuation, Some(valuation + rel), den, nums));
            }
        }
        if e < 0 {
            return self.invert()?.pow_int(-e);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let e = e as u64;
        if sparse {
            // Repeated multiplication by a sparse base is cheaper than
            // squaring the dense intermediate powers.
            let mut acc = self.clone();
            for _ in 1..e {
                acc = acc.mul(self);
            }
            return Ok(acc);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut k = e;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    Some(r) => r.mul(&base),
                    None => base.clone(),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        Ok(result.expect("e > 0"))
    }

    /// `q -> q^m`.
    pub fn rescale(&self, m: u64) -> Self {
        assert!(m > 0, "rescale factor must be positive");
        if m == 1 || self.is_zero() {
            return TruncatedSeries {
                valuation: self.valuation * m as i64,
                bound: self.bound.map(|b| b * m as i64),
                den: self.den.clone(),
                coeffs: self.coeffs.clone(),
            };
        }
        let m = m as usize;
        let mut coeffs = vec![BigInt::zero(); (self.coeffs.len() - 1) * m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m] = c.clone();
        }
        Self::from_parts(
            self.valuation * m as i64,
            self.bound.map(|b| b * m as i64),
            self.den.clone(),
            coeffs,
        )
    }

    /// Inverse of [`rescale`](Self::rescale): `q^(mn) -> q^n`. Every
    /// nonzero exponent must be a multiple of `m`.
    pub fn decimate(&self, m: u64) -> Result<Self> {
        assert!(m > 0, "decimation factor must be positive");
        let mi = m as i64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.valuation + i as i64;
            if !c.is_zero() && e.rem_euclid(mi) != 0 {
                return Err(Error::NotDecimable { step: m, exponent: e });
            }
        }
        let bound = self.bound.map(|b| b.div_euclid(mi) + i64::from(b.rem_euclid(mi) != 0));
        if self.is_zero() {
            return Ok(Self::empty(bound));
        }
        let start = self.valuation.div_euclid(mi);
        let coeffs = self.coeffs.iter().step_by(m as usize).cloned().collect();
        Ok(Self::from_parts(start, bound, self.den.clone(), coeffs))
    }

    /// `q d/dq`.
    pub fn theta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * (self.valuation + i as i64))
            .collect();
        Self::from_parts(self.valuation, self.bound, self.den.clone(), coeffs)
    }

    /// Coefficientwise transform `a(n) -> w(n) a(n)` with integer weights.
    pub fn map_weighted(&self, w: impl Fn(i64) -> BigInt) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if c.is_zero() { BigInt::zero() } else { c * w(self.valuation + i as i64) })
            .collect();
        Self::from_parts(self.valuation, self.bound, self.den.clone(), coeffs)
    }

    /// Tests `self ≡ other (mod m)` on the common window.
    pub fn congruent_mod(&self, other: &Self, m: &BigInt) -> Result<Congruence> {
        assert!(m.is_positive(), "modulus must be positive");
        let diff = self.sub(other)?;
        let mut first_failure = None;
        for (i, c) in diff.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = diff.valuation + i as i64;
            let value = BigRational::new(c.clone(), diff.den.clone());
            let residue = reduce_mod(&value, m).ok_or(Error::ModulusNotInvertible { exponent: n })?;
            if residue.is_zero() {
                continue;
            }
            let side = |s: &Self| s.coeff_at(n).ok().and_then(|v| reduce_mod(&v, m));
            let (lhs, rhs) = match (side(self), side(other)) {
                (Some(l), Some(r)) => (l, r),
                _ => (residue, BigInt::zero()),
            };
            first_failure = Some(Mismatch { exponent: n, lhs, rhs });
            break;
        }
        Ok(Congruence { modulus: m.clone(), bound: diff.bound, first_failure })
    }

    /// `true` iff the series vanishes modulo `m` on its window.
    pub fn vanishes_mod(&self, m: &BigInt) -> Result<Congruence> {
        let zero = match self.bound {
            Some(b) => Self::zero_to(b),
            None => Self::zero(),
        };
        self.congruent_mod(&zero, m)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            valuation: self.valuation,
            bound: self.bound,
            den: self.den.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        -&self
    }
}

// Operator forms panic where the method form would return an error; use
// `add`/`sub` directly when the windows may not overlap.
impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match e {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{e}")?,
            }
        }
        if let Some(b) = self.bound {
            if first {
                write!(f, "O(q^{b})")?;
            } else {
                write!(f, " + O(q^{b})")?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
