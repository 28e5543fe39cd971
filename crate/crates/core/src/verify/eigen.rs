use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::context::{Context, Need, Source};
use super::{compare, require_end, CongruenceReport, Failure, Params};
use crate::error::{Error, Result};
use crate::forms::NamedForm;
use crate::hecke::{hecke, HeckeSpec};
use crate::numthy::is_odd_prime;
use crate::series::TruncatedSeries;
use crate::spt::Statistic;

/// Forms that are Hecke eigenforms at every odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Eigenform {
    Mbar,
    M2,
    /// `Pbar^-7`, weight 7/2.
    PbarM7,
    /// `R^-7`, weight 7/2.
    RM7,
    /// `E * Pbar^-7`, weight 11/2.
    EPbarM7,
    /// `E(8 tau) * R^-7`, weight 11/2.
    E8RM7,
}

/// Output coefficients every eigenform check compares at minimum.
const OUTPUT_TERMS: i64 = 50;

impl Eigenform {
    pub const ALL: [Eigenform; 6] =
        [Eigenform::Mbar, Eigenform::M2, Eigenform::PbarM7, Eigenform::RM7, Eigenform::EPbarM7, Eigenform::E8RM7];

    pub fn name(self) -> &'static str {
        match self {
            Eigenform::Mbar => "Mbar",
            Eigenform::M2 => "M2",
            Eigenform::PbarM7 => "Pbar^-7",
            Eigenform::RM7 => "R^-7",
            Eigenform::EPbarM7 => "E*Pbar^-7",
            Eigenform::E8RM7 => "E8*R^-7",
        }
    }

    /// `lambda` with weight `lambda + 1/2`.
    pub fn lambda(self) -> i64 {
        match self {
            Eigenform::Mbar | Eigenform::M2 => 1,
            Eigenform::PbarM7 | Eigenform::RM7 => 3,
            Eigenform::EPbarM7 | Eigenform::E8RM7 => 5,
        }
    }

    pub fn eigenvalue(self, ell: i64) -> BigInt {
        let l = BigInt::from(ell);
        match self.lambda() {
            1 => l + 1,
            lambda => l.pow(2 * lambda as u32 - 1) + 1,
        }
    }

    pub fn valuation(self) -> i64 {
        match self {
            Eigenform::Mbar | Eigenform::PbarM7 | Eigenform::EPbarM7 => 0,
            Eigenform::M2 | Eigenform::RM7 | Eigenform::E8RM7 => 7,
        }
    }

    /// Smallest input bound giving [`OUTPUT_TERMS`] output coefficients.
    pub fn min_bound(self, ell: i64) -> i64 {
        ell * ell * (OUTPUT_TERMS + self.valuation().max(0)) + 1
    }

    fn series(self, ctx: &Context, bound: i64) -> Result<TruncatedSeries> {
        let pbar7 = || ctx.power(Source::Form(NamedForm::Pbar), -7, bound);
        let r7 = || ctx.power(Source::Form(NamedForm::R), -7, bound);
        Ok(match self {
            Eigenform::Mbar => ctx.stat(Statistic::Mbar, bound)?,
            Eigenform::M2 => ctx.stat(Statistic::M2, bound)?,
            Eigenform::PbarM7 => pbar7()?,
            Eigenform::RM7 => r7()?,
            Eigenform::EPbarM7 => ctx.form(NamedForm::E, bound)?.mul(&pbar7()?).truncate(bound),
            Eigenform::E8RM7 => ctx.rescaled(NamedForm::E, 8, bound)?.mul(&r7()?).truncate(bound),
        })
    }
}

impl fmt::Display for Eigenform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Eigenform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Eigenform::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown eigenform {s:?}")))
    }
}

pub(crate) fn needs(form: Eigenform, ell: i64, bound: Option<i64>) -> Vec<Need> {
    let b = bound.unwrap_or_else(|| form.min_bound(ell));
    let pbar7 = Need::new(Source::Form(NamedForm::Pbar), -7, b);
    let r7 = Need::new(Source::Form(NamedForm::R), -7, b);
    match form {
        Eigenform::Mbar => vec![Need::stat(Statistic::Mbar, b)],
        Eigenform::M2 => vec![Need::stat(Statistic::M2, b)],
        Eigenform::PbarM7 => vec![pbar7],
        Eigenform::RM7 => vec![r7],
        Eigenform::EPbarM7 => vec![Need::form(NamedForm::E, b), pbar7],
        Eigenform::E8RM7 => vec![Need::rescaled(NamedForm::E, 8, b), r7],
    }
}

/// Checks `f | T(ell^2) = expected * f` exactly, with `expected` defaulting
/// to the known eigenvalue. `bound` below the minimum is an error.
pub fn verify_eigenform(
    ctx: &Context,
    form: Eigenform,
    ell: i64,
    expected: Option<BigRational>,
    bound: Option<i64>,
) -> CongruenceReport {
    let eigenvalue = expected.unwrap_or_else(|| BigRational::from_integer(form.eigenvalue(ell)));
    let b = bound.unwrap_or_else(|| form.min_bound(ell));
    let params = Params::new()
        .int("ell", ell)
        .int("lambda", form.lambda())
        .text("eigenvalue", eigenvalue.to_string())
        .int("bound", b);
    let report = CongruenceReport::new(format!("eigen:{}", form.name()), params);
    match check(ctx, form, ell, &eigenvalue, b) {
        Ok(failure) => report.with_failure(failure),
        Err(e) => report.errored(&e),
    }
}

fn check(ctx: &Context, form: Eigenform, ell: i64, eigenvalue: &BigRational, bound: i64) -> Result<Option<Failure>> {
    if !is_odd_prime(ell) {
        return Err(Error::NotOddPrime(ell));
    }
    let min = form.min_bound(ell);
    if bound < min {
        return Err(Error::WindowTooSmall(format!("{} at ell = {ell} needs bound >= {min}", form.name())));
    }
    let f = form.series(ctx, bound)?;
    require_end(&f, bound, form.name())?;
    let image = hecke(&f, &HeckeSpec::trivial(ell, form.lambda())?)?;
    let want = f.scale(eigenvalue).truncate(image.end());
    compare(&image, &want, None)
}
