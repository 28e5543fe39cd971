use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::eta::EtaQuotient;
use crate::error::{Error, Result};
use crate::numthy::{factorize, rational_pow};

/// A constant of the form `r * 2^(s/2)` with `r` rational, stored with
/// `s ∈ {0, 1}` after moving whole powers of two into `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtTwoRational {
    pub rational: BigRational,
    pub sqrt2: bool,
}

impl SqrtTwoRational {
    pub fn squared(&self) -> BigRational {
        let sq = &self.rational * &self.rational;
        if self.sqrt2 {
            sq * BigRational::from_integer(BigInt::from(2))
        } else {
            sq
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut rational = &self.rational * &other.rational;
        if self.sqrt2 && other.sqrt2 {
            rational *= BigRational::from_integer(BigInt::from(2));
        }
        SqrtTwoRational { rational, sqrt2: self.sqrt2 ^ other.sqrt2 }
    }

    pub fn is_one(&self) -> bool {
        !self.sqrt2 && self.rational.is_one()
    }
}

impl fmt::Display for SqrtTwoRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.sqrt2, self.rational.is_one()) {
            (false, _) => write!(f, "{}", self.rational),
            (true, true) => write!(f, "sqrt(2)"),
            (true, false) => write!(f, "{}*sqrt(2)", self.rational),
        }
    }
}

/// Image of an eta quotient under the Fricke involution of some level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrickeImage {
    pub constant: SqrtTwoRational,
    pub quotient: EtaQuotient,
}

fn valuation(mut n: u64, p: u64) -> i64 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `eta(d tau)^r -> eta((N/d) tau)^r` with constant
/// `N^(-k/2) prod (N/d)^(r_d/2)`, `k` the weight, taking the positive
/// branch of every square root.
pub fn fricke_eta(eq: &EtaQuotient, level: u64) -> Result<FrickeImage> {
    for &(d, _) in eq.terms() {
        if level % d != 0 {
            return Err(Error::ScaleNotDividingLevel { scale: d, level });
        }
    }
    let twice_k = eq.twice_weight();
    // Exponent of each prime in the constant, in quarters.
    let mut quarters: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, e) in factorize(level) {
        *quarters.entry(p).or_default() -= twice_k * i64::from(e);
    }
    for &(d, r) in eq.terms() {
        for (p, _) in factorize(level / d) {
            *quarters.entry(p).or_default() += 2 * r * valuation(level / d, p);
        }
    }
    let mut rational = BigRational::one();
    let mut sqrt2 = false;
    for (p, q) in quarters {
        if p == 2 {
            if q % 2 != 0 {
                return Err(Error::ConstantOutsideDomain { prime: 2 });
            }
            let halves = q / 2;
            rational *= rational_pow(2, halves.div_euclid(2));
            sqrt2 = halves.rem_euclid(2) == 1;
        } else {
            if q % 4 != 0 {
                return Err(Error::ConstantOutsideDomain { prime: p });
            }
            rational *= rational_pow(p as i64, q / 4);
        }
    }
    debug_assert!(rational.is_positive());
    let quotient = EtaQuotient::new(eq.terms().iter().map(|&(d, r)| (level / d, r)));
    Ok(FrickeImage { constant: SqrtTwoRational { rational, sqrt2 }, quotient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn r_maps_to_pbar_with_root_eight() {
        let img = fricke_eta(&EtaQuotient::new([(8, 1), (16, -2)]), 16).unwrap();
        assert_eq!(img.quotient, EtaQuotient::new([(2, 1), (1, -2)]));
        assert_eq!(img.constant, SqrtTwoRational { rational: r(2, 1), sqrt2: true });
        assert_eq!(img.constant.squared(), r(8, 1));
    }

    #[test]
    fn psi_maps_to_rho() {
        let img = fricke_eta(&EtaQuotient::new([(2, 16), (1, -8)]), 2).unwrap();
        assert_eq!(img.quotient, EtaQuotient::new([(1, 16), (2, -8)]));
        assert_eq!(img.constant, SqrtTwoRational { rational: r(1, 64), sqrt2: false });
    }

    #[test]
    fn level_must_be_a_multiple_of_every_scale() {
        let e = fricke_eta(&EtaQuotient::new([(3, 1)]), 4);
        assert_eq!(e, Err(Error::ScaleNotDividingLevel { scale: 3, level: 4 }));
        let odd = fricke_eta(&EtaQuotient::new([(1, 1)]), 3);
        assert_eq!(odd, Err(Error::ConstantOutsideDomain { prime: 3 }));
    }

    proptest! {
        #[test]
        fn involution_on_levels_two_four_sixteen(
            level in prop::sample::select(vec![2u64, 4, 16]),
            powers in prop::collection::vec(-12i64..12, 5),
        ) {
            let scales: Vec<u64> = [1u64, 2, 4, 8, 16].into_iter().filter(|d| level % d == 0).collect();
            let eq = EtaQuotient::new(scales.iter().copied().zip(powers.iter().copied()));
            prop_assume!(eq.twice_weight() % 2 == 0);
            let once = fricke_eta(&eq, level).unwrap();
            let twice = fricke_eta(&once.quotient, level).unwrap();
            prop_assert_eq!(&twice.quotient, &eq);
            prop_assert!(once.constant.mul(&twice.constant).is_one());
        }
    }
}
