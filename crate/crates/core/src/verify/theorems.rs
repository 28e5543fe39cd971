use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::context::{Context, Need, Source};
use super::{require_end, CongruenceReport, Failure, Params};
use crate::error::{Error, Result};
use crate::forms::NamedForm;
use crate::numthy::{is_odd_prime, kronecker, rational_pow, reduce_mod};
use crate::spt::Statistic;

/// The Hecke-type congruences for `spt`, `sptbar`, `M2spt` and `pbar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    /// `spt`, modulo 72, `ell > 5`.
    Garvan72,
    /// `spt`, modulo `t` in {5, 7, 13}, `ell >= 5`.
    GarvanT,
    /// `sptbar`, modulo `2^alpha`, 3 and 5.
    Sptbar,
    /// `M2spt`, modulo `2^beta`, 3 and 5.
    M2spt,
    /// `pbar`, modulo 16.
    Pbar16,
    /// `n pbar(n)`, modulo `2^gamma`.
    PbarTheta,
    /// `sptbar`, modulo 3.
    BloMod3,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::Garvan72,
        TheoremId::GarvanT,
        TheoremId::Sptbar,
        TheoremId::M2spt,
        TheoremId::Pbar16,
        TheoremId::PbarTheta,
        TheoremId::BloMod3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Garvan72 => "garvan_72",
            TheoremId::GarvanT => "garvan_t",
            TheoremId::Sptbar => "sptbar",
            TheoremId::M2spt => "m2spt",
            TheoremId::Pbar16 => "pbar_16",
            TheoremId::PbarTheta => "pbar_theta",
            TheoremId::BloMod3 => "blo_mod3",
        }
    }

    /// Rejects primes outside the theorem's hypotheses.
    pub fn admits(self, ell: i64) -> Result<()> {
        if !is_odd_prime(ell) {
            return Err(Error::NotOddPrime(ell));
        }
        match self {
            TheoremId::Garvan72 if ell <= 5 => Err(Error::Hypothesis(format!("garvan_72 needs ell > 5, got {ell}"))),
            TheoremId::GarvanT if ell < 5 => Err(Error::Hypothesis(format!("garvan_t needs ell >= 5, got {ell}"))),
            _ => Ok(()),
        }
    }

    pub fn default_n_max(self) -> i64 {
        match self {
            TheoremId::Garvan72 | TheoremId::GarvanT => 50,
            TheoremId::Sptbar | TheoremId::M2spt => 100,
            TheoremId::Pbar16 | TheoremId::PbarTheta | TheoremId::BloMod3 => 200,
        }
    }

    fn source(self) -> Source {
        match self {
            TheoremId::Garvan72 | TheoremId::GarvanT => Source::Stat(Statistic::Spt),
            TheoremId::Sptbar | TheoremId::BloMod3 => Source::Stat(Statistic::Sptbar),
            TheoremId::M2spt => Source::Stat(Statistic::M2spt),
            TheoremId::Pbar16 | TheoremId::PbarTheta => Source::Form(NamedForm::Pbar),
        }
    }

    /// The moduli `t`, before removing `t = ell`.
    pub fn moduli(self, ell: i64) -> Vec<i64> {
        match self {
            TheoremId::Garvan72 => vec![72],
            TheoremId::GarvanT => vec![5, 7, 13],
            TheoremId::Sptbar => vec![1 << alpha(ell), 3, 5],
            TheoremId::M2spt => vec![1 << beta(ell), 3, 5],
            TheoremId::Pbar16 => vec![16],
            TheoremId::PbarTheta => vec![1 << gamma(ell)],
            TheoremId::BloMod3 => vec![3],
        }
    }

    /// `s_ell` in the shifted arguments `ell^2 n - s_ell`.
    fn shift(self, ell: i64) -> i64 {
        match self {
            TheoremId::Garvan72 | TheoremId::GarvanT => (ell * ell - 1) / 24,
            TheoremId::M2spt => (ell * ell - 1) / 8,
            _ => 0,
        }
    }

    fn first_n(self) -> i64 {
        match self {
            TheoremId::Pbar16 | TheoremId::PbarTheta => 0,
            _ => 1,
        }
    }

    fn index_bound(self, ell: i64, n_max: i64) -> i64 {
        ell * ell * n_max - self.shift(ell) + 1
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem {s:?}")))
    }
}

/// Exponent of the power of 2 in the `sptbar` congruence.
pub fn alpha(ell: i64) -> u32 {
    match ell.rem_euclid(8) {
        3 => 6,
        5 | 7 => 7,
        _ => 8,
    }
}

/// Exponent of the power of 2 in the `M2spt` congruence.
pub fn beta(ell: i64) -> u32 {
    match ell.rem_euclid(8) {
        3 => 1,
        5 => 2,
        _ => 3,
    }
}

/// Exponent of the power of 2 in the `n pbar(n)` congruence.
pub fn gamma(ell: i64) -> u32 {
    match ell.rem_euclid(8) {
        3 => 5,
        5 | 7 => 6,
        _ => 7,
    }
}

pub(crate) fn needs(id: TheoremId, ell: i64, n_max: i64) -> Vec<Need> {
    vec![Need::new(id.source(), 1, id.index_bound(ell, n_max))]
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Both sides of the congruence at every `n` in range.
fn sides(id: TheoremId, ell: i64, n_max: i64, a: &dyn Fn(i64) -> Result<BigRational>) -> Result<Vec<(i64, BigRational, BigRational)>> {
    let l2 = ell * ell;
    let s = id.shift(ell);
    let at_quotient = |m: i64| -> Result<BigRational> {
        if m >= 0 && m % l2 == 0 {
            a(m / l2)
        } else {
            Ok(BigRational::zero())
        }
    };
    let one_plus = int(1 + ell);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in id.first_n()..=n_max {
        let an = a(n)?;
        let (lhs, rhs) = match id {
            TheoremId::Garvan72 | TheoremId::GarvanT | TheoremId::M2spt => {
                let (chi, mid) = if id == TheoremId::M2spt {
                    (kronecker(2, ell), kronecker(1 - 8 * n, ell))
                } else {
                    (kronecker(12, ell), kronecker(1 - 24 * n, ell))
                };
                let lhs = a(l2 * n - s)? + &an * int(i64::from(chi * mid)) + at_quotient(n + s)? * int(ell);
                (lhs, &an * &one_plus * int(i64::from(chi)))
            }
            TheoremId::Sptbar | TheoremId::BloMod3 => {
                let lhs = a(l2 * n)? + &an * int(i64::from(kronecker(-n, ell))) + at_quotient(n)? * int(ell);
                (lhs, &an * &one_plus)
            }
            TheoremId::Pbar16 => {
                let lhs = a(l2 * n)?
                    + &an * int(i64::from(kronecker(-n, ell))) * rational_pow(ell, -2)
                    + at_quotient(n)? * rational_pow(ell, -3);
                (lhs, &an * &one_plus)
            }
            TheoremId::PbarTheta => {
                let nn = int(n);
                let lhs = a(l2 * n)? * int(l2 * n)
                    + &an * &nn * int(i64::from(kronecker(-n, ell)))
                    + at_quotient(n)? * &nn * rational_pow(ell, -1);
                (lhs, &an * &one_plus * &nn)
            }
        };
        out.push((n, lhs, rhs));
    }
    Ok(out)
}

/// Checks one theorem for one prime, producing a report per modulus `t`.
/// Moduli equal to `ell` are reported as skipped; primes outside the
/// theorem's hypotheses are an error.
pub fn verify_theorem(ctx: &Context, id: TheoremId, ell: i64, n_max: i64) -> Result<Vec<CongruenceReport>> {
    id.admits(ell)?;
    if n_max < 1 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let bound = id.index_bound(ell, n_max);
    let series = ctx.series(id.source(), bound)?;
    require_end(&series, bound, id.source().to_string().as_str())?;
    let a = |m: i64| -> Result<BigRational> {
        if m < 0 {
            Ok(BigRational::zero())
        } else {
            series.coeff_at(m)
        }
    };
    let values = sides(id, ell, n_max, &a)?;
    let mut reports = Vec::new();
    for t in id.moduli(ell) {
        let mut params = Params::new().int("ell", ell).int("t", t).int("n_max", n_max).int("bound", bound);
        params = match id {
            TheoremId::Sptbar => params.int("alpha", alpha(ell).into()),
            TheoremId::M2spt => params.int("beta", beta(ell).into()),
            TheoremId::PbarTheta => params.int("gamma", gamma(ell).into()),
            _ => params,
        };
        let report = CongruenceReport::new(id.name(), params);
        if t == ell {
            reports.push(report.skipped(format!("hypothesis excludes t = ell = {t}")));
            continue;
        }
        let m = BigInt::from(t);
        let mut failure = None;
        for (n, lhs, rhs) in &values {
            let reduce = |r: &BigRational| reduce_mod(r, &m).ok_or(Error::ModulusNotInvertible { exponent: *n });
            let (l, r) = (reduce(lhs)?, reduce(rhs)?);
            if l != r {
                failure = Some(Failure::values(*n, l, r));
                break;
            }
        }
        reports.push(report.with_failure(failure));
    }
    Ok(reports)
}
