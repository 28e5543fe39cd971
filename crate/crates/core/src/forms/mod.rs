//! Eta quotients, Eisenstein series and the named modular forms, together
//! with Fricke images and linear decompositions.

mod decompose;
mod eta;
mod expr;
mod fricke;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numthy::{bernoulli, sigma_table};
use crate::series::TruncatedSeries;

pub use decompose::{decompose_in_basis, hauptmodul_decompose};
pub use eta::EtaQuotient;
pub use expr::{Atom, Factor, FormExpr};
pub use fricke::{fricke_eta, FrickeImage, SqrtTwoRational};

/// `E_k = 1 - (2k / B_k) sum sigma_(k-1)(n) q^n` for even `k >= 2`.
pub fn eisenstein(k: u32, bound: i64) -> Result<TruncatedSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Eisenstein series needs an even weight >= 2, got {k}")));
    }
    if bound <= 0 {
        return Ok(TruncatedSeries::zero_to(bound));
    }
    let factor = -BigRational::from_integer(BigInt::from(2 * k)) / bernoulli(k as usize);
    debug_assert!(factor.is_integer());
    let factor = factor.to_integer();
    let mut coeffs = sigma_table(k - 1, bound as usize);
    for c in coeffs.iter_mut() {
        *c *= &factor;
    }
    coeffs[0] = BigInt::from(1);
    Ok(TruncatedSeries::from_integers(0, Some(bound), coeffs))
}

/// `sum_{n >= 0} q^((2n+1)^2)`, the reciprocal of `R`.
pub fn odd_square_theta(bound: i64) -> TruncatedSeries {
    let terms = (0..)
        .map(|n: i64| (2 * n + 1) * (2 * n + 1))
        .take_while(|&e| e < bound)
        .map(|e| (e, BigRational::from_integer(BigInt::from(1))));
    TruncatedSeries::from_terms(Some(bound), terms)
}

/// `sum_{n in Z} (-1)^n q^(n^2)`, the reciprocal of `Pbar`.
pub fn alternating_theta(bound: i64) -> TruncatedSeries {
    square_theta(bound, true)
}

fn square_theta(bound: i64, alternating: bool) -> TruncatedSeries {
    let terms = (0..).take_while(|&n: &i64| n * n < bound).map(|n| {
        let sign = if alternating && n % 2 == 1 { -1 } else { 1 };
        let c = if n == 0 { 1 } else { 2 * sign };
        (n * n, BigRational::from_integer(BigInt::from(c)))
    });
    TruncatedSeries::from_terms(Some(bound), terms)
}

/// The forms that recur throughout the congruence proofs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedForm {
    /// `eta(2t) / eta(t)^2`, generating function of overpartitions.
    Pbar,
    /// `eta(8t) / eta(16t)^2`.
    R,
    /// `2 E_2(2t) - E_2(t)`.
    E,
    /// `eta(2t)^16 / eta(t)^8`.
    Psi,
    /// `eta(t)^16 / eta(2t)^8`.
    Rho,
    /// `E * Pbar`.
    H,
    /// `E(8t) * R`.
    G,
    /// `(eta(t) / eta(2t))^24`.
    J2,
    /// `sum sigma_1(2n+1) q^(2n+1)`.
    F,
    /// `sum_{n in Z} q^(n^2)`.
    Theta0,
}

impl NamedForm {
    pub const ALL: [NamedForm; 10] = [
        NamedForm::Pbar,
        NamedForm::R,
        NamedForm::E,
        NamedForm::Psi,
        NamedForm::Rho,
        NamedForm::H,
        NamedForm::G,
        NamedForm::J2,
        NamedForm::F,
        NamedForm::Theta0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedForm::Pbar => "Pbar",
            NamedForm::R => "R",
            NamedForm::E => "E",
            NamedForm::Psi => "psi",
            NamedForm::Rho => "rho",
            NamedForm::H => "h",
            NamedForm::G => "g",
            NamedForm::J2 => "j2",
            NamedForm::F => "F",
            NamedForm::Theta0 => "theta0",
        }
    }

    pub fn eta_quotient(self) -> Option<EtaQuotient> {
        Some(match self {
            NamedForm::Pbar => EtaQuotient::new([(2, 1), (1, -2)]),
            NamedForm::R => EtaQuotient::new([(8, 1), (16, -2)]),
            NamedForm::Psi => EtaQuotient::new([(2, 16), (1, -8)]),
            NamedForm::Rho => EtaQuotient::new([(1, 16), (2, -8)]),
            NamedForm::J2 => EtaQuotient::new([(1, 24), (2, -24)]),
            _ => return None,
        })
    }

    pub fn valuation(self) -> i64 {
        match self {
            NamedForm::R | NamedForm::G | NamedForm::J2 => -1,
            NamedForm::Psi | NamedForm::F => 1,
            _ => 0,
        }
    }

    /// Sparse closed form of `1 / self` below `bound`, where one is known.
    pub fn reciprocal(self, bound: i64) -> Option<TruncatedSeries> {
        match self {
            NamedForm::R => Some(odd_square_theta(bound)),
            NamedForm::Pbar => Some(alternating_theta(bound)),
            _ => None,
        }
    }

    /// Exact expansion with window ending at `bound`.
    pub fn expand(self, bound: i64) -> Result<TruncatedSeries> {
        if let Some(eq) = self.eta_quotient() {
            return eq.expand(bound);
        }
        match self {
            NamedForm::E => {
                let half = eisenstein(2, bound.div_euclid(2) + 1)?.rescale(2).truncate(bound);
                Ok(half.scale_int(2).sub(&eisenstein(2, bound)?)?)
            }
            NamedForm::H => Ok(NamedForm::E.expand(bound)?.mul(&NamedForm::Pbar.expand(bound)?)),
            NamedForm::G => {
                let e8 = NamedForm::E.expand(bound.div_euclid(8) + 2)?.rescale(8);
                Ok(e8.mul(&NamedForm::R.expand(bound)?).truncate(bound))
            }
            NamedForm::F => {
                let len = bound.max(0) as usize;
                let mut coeffs = sigma_table(1, len);
                for (n, c) in coeffs.iter_mut().enumerate() {
                    if n % 2 == 0 {
                        *c = BigInt::zero();
                    }
                }
                Ok(TruncatedSeries::from_integers(0, Some(bound), coeffs))
            }
            NamedForm::Theta0 => Ok(square_theta(bound, false)),
            _ => unreachable!("eta quotients handled above"),
        }
    }
}

impl fmt::Display for NamedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let found = NamedForm::ALL.into_iter().find(|f| f.name() == s);
        match (found, s) {
            (Some(f), _) => Ok(f),
            (None, "pbar") => Ok(NamedForm::Pbar),
            _ => Err(Error::UnknownForm(s.to_string())),
        }
    }
}

/// Expansion of a named form looked up by name.
pub fn named_form(name: &str, bound: i64) -> Result<TruncatedSeries> {
    name.parse::<NamedForm>()?.expand(bound)
}

#[cfg(test)]
mod tests;
