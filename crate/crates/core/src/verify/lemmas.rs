use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::context::{Context, Need, Source};
use super::{compare, require_end, CongruenceReport, Failure, Params};
use crate::error::{Error, Result};
use crate::forms::{eisenstein, NamedForm};
use crate::hecke::{hecke, HeckeSpec};
use crate::numthy::is_odd_prime;
use crate::series::TruncatedSeries;
use crate::spt::Statistic;

/// The auxiliary congruences and identities between named forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LemmaId {
    /// `theta Pbar = theta(Pbar^-31 + 64 Pbar psi)` mod 128.
    L1,
    /// `E - E2 = 16 psi` mod 32.
    L2,
    /// `4 E2(2 tau) - E2 = 3 E rho` mod 45.
    L3,
    /// `E2(2 tau) - E2 = 24 E psi` mod 45.
    L4,
    /// `E2(2 tau) - E2 = 24 psi - 16 psi^2 + 32 psi^4` mod 64.
    L5,
    /// `rho = 1` and `Pbar = Pbar^-7` mod 16.
    L6,
    /// `h | T(ell^2) = (1 + ell) h` mod 4096.
    L7,
    /// `Mbar - Sbar = 11 Pbar^-7 E` and `M2 - S2 = R^-7 E(8 tau)` mod 15.
    L8,
    /// The exact relation between `Sbar | T(ell^2)`, `h` and `Pbar`.
    L9,
}

impl LemmaId {
    pub const ALL: [LemmaId; 9] =
        [LemmaId::L1, LemmaId::L2, LemmaId::L3, LemmaId::L4, LemmaId::L5, LemmaId::L6, LemmaId::L7, LemmaId::L8, LemmaId::L9];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::L1 => "L1",
            LemmaId::L2 => "L2",
            LemmaId::L3 => "L3",
            LemmaId::L4 => "L4",
            LemmaId::L5 => "L5",
            LemmaId::L6 => "L6",
            LemmaId::L7 => "L7",
            LemmaId::L8 => "L8",
            LemmaId::L9 => "L9",
        }
    }

    /// Whether the lemma is stated for each odd prime.
    pub fn per_prime(self) -> bool {
        matches!(self, LemmaId::L7 | LemmaId::L9)
    }

    /// Modulus of the congruence, `None` for exact identities.
    pub fn modulus(self) -> Option<i64> {
        match self {
            LemmaId::L1 => Some(128),
            LemmaId::L2 => Some(32),
            LemmaId::L3 | LemmaId::L4 => Some(45),
            LemmaId::L5 => Some(64),
            LemmaId::L6 => Some(16),
            LemmaId::L7 => Some(4096),
            LemmaId::L8 => Some(15),
            LemmaId::L9 => None,
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown lemma {s:?}")))
    }
}

const PBAR: Source = Source::Form(NamedForm::Pbar);
const RS: Source = Source::Form(NamedForm::R);
const PSI: Source = Source::Form(NamedForm::Psi);

pub(crate) fn needs(id: LemmaId, _ell: Option<i64>, b: i64) -> Vec<Need> {
    use NamedForm::*;
    match id {
        LemmaId::L1 => vec![Need::form(Pbar, b), Need::new(PBAR, -31, b), Need::form(Psi, b)],
        LemmaId::L2 | LemmaId::L4 => vec![Need::form(E, b), Need::form(Psi, b)],
        LemmaId::L3 => vec![Need::form(E, b), Need::form(Rho, b)],
        LemmaId::L5 => vec![Need::form(Psi, b), Need::new(PSI, 2, b), Need::new(PSI, 4, b)],
        LemmaId::L6 => vec![Need::form(Rho, b), Need::form(Pbar, b), Need::new(PBAR, -7, b)],
        LemmaId::L7 => vec![Need::form(H, b)],
        LemmaId::L8 => vec![
            Need::stat(Statistic::Mbar, b),
            Need::stat(Statistic::Sptbar, b),
            Need::stat(Statistic::M2, b),
            Need::stat(Statistic::S2, b),
            Need::new(PBAR, -7, b),
            Need::form(E, b),
            Need::new(RS, -7, b),
            Need::rescaled(E, 8, b),
        ],
        LemmaId::L9 => vec![Need::stat(Statistic::Sptbar, b), Need::form(H, b), Need::form(Pbar, b)],
    }
}

/// `E2(m tau)` below `bound`.
fn e2(m: i64, bound: i64) -> Result<TruncatedSeries> {
    Ok(eisenstein(2, bound.div_euclid(m) + 1)?.rescale(m as u64).truncate(bound))
}

/// One side-by-side comparison inside a lemma.
struct Part {
    name: &'static str,
    lhs: TruncatedSeries,
    rhs: TruncatedSeries,
}

fn part(name: &'static str, lhs: TruncatedSeries, rhs: TruncatedSeries) -> Part {
    Part { name, lhs, rhs }
}

/// Checks one lemma on `[.., bound)`; `ell` is required for per-prime
/// lemmas and ignored otherwise.
pub fn verify_lemma(ctx: &Context, id: LemmaId, ell: Option<i64>, bound: i64) -> CongruenceReport {
    let mut params = Params::new().int("bound", bound);
    if let Some(m) = id.modulus() {
        params = params.int("modulus", m);
    }
    if let (true, Some(l)) = (id.per_prime(), ell) {
        params = params.int("ell", l);
    }
    let report = CongruenceReport::new(id.name(), params);
    let m = id.modulus().map(BigInt::from);
    let parts = match parts(ctx, id, ell, bound) {
        Ok(p) => p,
        Err(e) => return report.errored(&e),
    };
    for p in &parts {
        match compare(&p.lhs, &p.rhs, m.as_ref()) {
            Ok(None) => {}
            Ok(Some(f)) => {
                let mut r = report.with_failure(Some(f));
                if parts.len() > 1 {
                    r.note = Some(format!("in {}", p.name));
                }
                return r;
            }
            Err(e) => return report.errored(&e),
        }
    }
    report.with_failure(None::<Failure>)
}

fn parts(ctx: &Context, id: LemmaId, ell: Option<i64>, b: i64) -> Result<Vec<Part>> {
    use NamedForm::*;
    let form = |f: NamedForm| -> Result<TruncatedSeries> {
        let s = ctx.form(f, b)?;
        require_end(&s, b, f.name())?;
        Ok(s)
    };
    let prime = || -> Result<i64> {
        match ell {
            Some(l) if is_odd_prime(l) => Ok(l),
            Some(l) => Err(Error::NotOddPrime(l)),
            None => Err(Error::InvalidArgument(format!("{} needs a prime", id.name()))),
        }
    };
    let eq = |name, lhs: TruncatedSeries, rhs: TruncatedSeries| part(name, lhs.truncate(b), rhs.truncate(b));
    Ok(match id {
        LemmaId::L1 => {
            let pbar = form(Pbar)?;
            let inner = ctx.power(PBAR, -31, b)?.add(&pbar.mul(&form(Psi)?).scale_int(64))?;
            vec![eq("theta Pbar", pbar.theta(), inner.theta())]
        }
        LemmaId::L2 => {
            let lhs = form(E)?.sub(&e2(1, b)?)?;
            vec![eq("E - E2", lhs, form(Psi)?.scale_int(16))]
        }
        LemmaId::L3 => {
            let lhs = e2(2, b)?.scale_int(4).sub(&e2(1, b)?)?;
            vec![eq("4 E2(2 tau) - E2", lhs, form(E)?.mul(&form(Rho)?).scale_int(3))]
        }
        LemmaId::L4 => {
            let lhs = e2(2, b)?.sub(&e2(1, b)?)?;
            vec![eq("E2(2 tau) - E2", lhs, form(E)?.mul(&form(Psi)?).scale_int(24))]
        }
        LemmaId::L5 => {
            let lhs = e2(2, b)?.sub(&e2(1, b)?)?;
            let rhs = form(Psi)?
                .scale_int(24)
                .sub(&ctx.power(PSI, 2, b)?.scale_int(16))?
                .add(&ctx.power(PSI, 4, b)?.scale_int(32))?;
            vec![eq("E2(2 tau) - E2", lhs, rhs)]
        }
        LemmaId::L6 => vec![
            eq("rho", form(Rho)?, TruncatedSeries::one()),
            eq("Pbar", form(Pbar)?, ctx.power(PBAR, -7, b)?),
        ],
        LemmaId::L7 => {
            let ell = prime()?;
            let h = form(H)?;
            let image = hecke(&h, &HeckeSpec::trivial(ell, 1)?)?;
            let end = image.end();
            vec![part("h", image, h.scale_int(1 + ell).truncate(end))]
        }
        LemmaId::L8 => {
            let stat = |s: Statistic| -> Result<TruncatedSeries> {
                let x = ctx.stat(s, b)?;
                require_end(&x, b, s.name())?;
                Ok(x)
            };
            let lhs1 = stat(Statistic::Mbar)?.sub(&stat(Statistic::Sptbar)?)?;
            let rhs1 = ctx.power(PBAR, -7, b)?.mul(&form(E)?).scale_int(11);
            let lhs2 = stat(Statistic::M2)?.sub(&stat(Statistic::S2)?)?;
            let rhs2 = ctx.power(RS, -7, b)?.mul(&ctx.rescaled(E, 8, b)?);
            vec![eq("Mbar - Sbar", lhs1, rhs1), eq("M2 - S2", lhs2, rhs2)]
        }
        LemmaId::L9 => {
            let ell = prime()?;
            let one_plus = 1 + ell;
            let sbar = ctx.stat(Statistic::Sptbar, b)?;
            require_end(&sbar, b, "sptbar")?;
            let lhs = hecke(&sbar, &HeckeSpec::trivial(ell, 1)?)?.sub(&sbar.scale_int(one_plus))?;
            let h = form(H)?;
            let h_part = hecke(&h, &HeckeSpec::trivial(ell, 1)?)?.sub(&h.scale_int(one_plus))?;
            let pbar = form(Pbar)?;
            let p_part = hecke(&pbar, &HeckeSpec::trivial(ell, -1)?)?
                .scale_int(ell * ell)
                .sub(&pbar.scale_int(one_plus))?;
            let quarter = BigRational::new(1.into(), 4.into());
            let rhs = h_part.scale(&quarter).sub(&p_part.theta().scale_int(2))?;
            let end = lhs.end().min(rhs.end());
            vec![part("Sbar | T", lhs.truncate(end), rhs.truncate(end))]
        }
    })
}
