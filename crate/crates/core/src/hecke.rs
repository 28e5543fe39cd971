//! Half-integral weight Hecke operators `T(ell^2)`, Shimura lifts and
//! quadratic twists.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numthy::{divisors, is_odd_prime, is_squarefree, isqrt, kronecker, QuadChar};
use crate::series::TruncatedSeries;

/// Parameters of `T(ell^2)` in weight `lambda + 1/2` with character `chi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeckeSpec {
    pub ell: i64,
    pub lambda: i64,
    pub chi: QuadChar,
}

impl HeckeSpec {
    pub fn new(ell: i64, lambda: i64, chi: QuadChar) -> Result<Self> {
        if !is_odd_prime(ell) {
            return Err(Error::NotOddPrime(ell));
        }
        Ok(HeckeSpec { ell, lambda, chi })
    }

    /// Trivial character.
    pub fn trivial(ell: i64, lambda: i64) -> Result<Self> {
        Self::new(ell, lambda, QuadChar::Trivial)
    }

    /// `chi*(m) = ((-1)^lambda / m) chi(m)`.
    pub fn chi_star(&self, m: i64) -> i32 {
        let sign = if self.lambda % 2 == 0 { 1 } else { -1 };
        kronecker(sign, m) * self.chi.eval(m)
    }
}

fn ell_power(ell: i64, e: i64) -> BigInt {
    BigInt::from(ell).pow(e as u32)
}

/// Exclusive end of the output window for an input ending at `end`.
fn hecke_end(end: i64, l2: i64) -> i64 {
    ((end - 1).div_euclid(l2) + 1).min(end).min(l2 * end)
}

/// Applies `T(ell^2)`:
/// `a(ell^2 n) + chi*(ell) (n/ell) ell^(lambda-1) a(n) + chi*(ell^2) ell^(2 lambda-1) a(n/ell^2)`.
///
/// The output window is the strictest of the three terms' requirements.
pub fn hecke(f: &TruncatedSeries, spec: &HeckeSpec) -> Result<TruncatedSeries> {
    let HeckeSpec { ell, lambda, .. } = *spec;
    if !is_odd_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    let l2 = ell * ell;
    if f.is_zero() {
        return Ok(match f.bound() {
            Some(b) => TruncatedSeries::zero_to(hecke_end(b, l2)),
            None => TruncatedSeries::zero(),
        });
    }
    let v = f.valuation();
    let lo = v.div_euclid(l2).min(v).min(l2 * v);
    let (hi, bound) = match f.bound() {
        Some(b) => {
            let e = hecke_end(b, l2);
            (e, Some(e))
        }
        None => {
            let last = f.end() - 1;
            ((last.div_euclid(l2)).max(last).max(l2 * last) + 1, None)
        }
    };
    // Common denominator ell^s makes both powers of ell integral.
    let s = 0.max(1 - lambda).max(1 - 2 * lambda);
    let scale = ell_power(ell, s);
    let mid = BigInt::from(spec.chi_star(ell)) * ell_power(ell, lambda - 1 + s);
    let chi_l = spec.chi_star(ell);
    let last = BigInt::from(chi_l * chi_l) * ell_power(ell, 2 * lambda - 1 + s);
    let mut nums = Vec::with_capacity((hi - lo).max(0) as usize);
    for n in lo..hi {
        let mut c = f.numerator_at(l2 * n) * &scale;
        let leg = kronecker(n, ell);
        if leg != 0 {
            let a = f.numerator_at(n);
            if !a.is_zero() {
                c += a * &mid * leg;
            }
        }
        if n % l2 == 0 {
            let a = f.numerator_at(n / l2);
            if !a.is_zero() {
                c += a * &last;
            }
        }
        nums.push(c);
    }
    Ok(TruncatedSeries::from_numerators(lo, bound, f.denominator() * scale, nums))
}

/// Checks `ell^2 theta(f | T_lambda) = (theta f) | T_(lambda+2)` on the
/// common window.
pub fn theta_commutation_check(f: &TruncatedSeries, spec: &HeckeSpec) -> Result<bool> {
    let lhs = hecke(f, spec)?.theta().scale_int(spec.ell * spec.ell);
    let shifted = HeckeSpec { lambda: spec.lambda + 2, ..*spec };
    let rhs = hecke(&f.theta(), &shifted)?;
    let end = lhs.end().min(rhs.end());
    Ok(lhs.truncate(end) == rhs.truncate(end))
}

/// The `t`-th Shimura lift of weight `k`:
/// `sum_{d | n} d^(k-1) ((-1)^k 4t / d) a(t n^2 / d^2)` on `[1, ...)`.
pub fn shimura(f: &TruncatedSeries, t: i64, k: u32) -> Result<TruncatedSeries> {
    if !is_squarefree(t) {
        return Err(Error::NotSquarefree(t));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("Shimura lift weight must be positive".into()));
    }
    if f.valuation() < 0 && !f.is_zero() {
        return Err(Error::InvalidArgument("Shimura lift needs a series without negative powers".into()));
    }
    let end = f.end();
    let hi = if end <= t { 1 } else { isqrt((end - 1) / t) + 1 };
    let bound = f.bound().map(|_| hi);
    let disc = if k % 2 == 0 { 4 * t } else { -4 * t };
    let mut nums = Vec::with_capacity((hi - 1).max(0) as usize);
    for n in 1..hi {
        let mut c = BigInt::zero();
        for d in divisors(n as u64) {
            let d = d as i64;
            let chi = kronecker(disc, d);
            if chi == 0 {
                continue;
            }
            let m = n / d;
            let a = f.numerator_at(t * m * m);
            if a.is_zero() {
                continue;
            }
            let w = BigInt::from(d).pow(k - 1) * a;
            if chi > 0 {
                c += w;
            } else {
                c -= w;
            }
        }
        nums.push(c);
    }
    Ok(TruncatedSeries::from_numerators(1, bound, f.denominator().clone(), nums))
}

/// `sum chi(n) a(n) q^n`.
pub fn twist(f: &TruncatedSeries, chi: QuadChar) -> TruncatedSeries {
    if chi == QuadChar::Trivial {
        return f.clone();
    }
    f.map_weighted(|n| BigInt::from(chi.eval(n)))
}
