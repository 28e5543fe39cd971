use std::fmt;
use std::str::FromStr;

use super::{EtaQuotient, NamedForm};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::spt::Statistic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Named(NamedForm),
    Statistic(Statistic),
    Zero,
    One,
}

impl Atom {
    fn valuation(self) -> i64 {
        match self {
            Atom::Named(f) => f.valuation(),
            Atom::Statistic(s) => s.valuation(),
            Atom::Zero | Atom::One => 0,
        }
    }

    fn expand(self, bound: i64) -> Result<TruncatedSeries> {
        match self {
            Atom::Named(f) => f.expand(bound),
            Atom::Statistic(s) => s.series(bound),
            Atom::Zero => Ok(TruncatedSeries::zero_to(bound)),
            Atom::One => Ok(TruncatedSeries::one().truncate(bound)),
        }
    }

    fn eta_quotient(self) -> Option<EtaQuotient> {
        match self {
            Atom::Named(f) => f.eta_quotient(),
            Atom::One => Some(EtaQuotient::default()),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Named(n) => write!(f, "{n}"),
            Atom::Statistic(s) => write!(f, "{s}"),
            Atom::Zero => write!(f, "zero"),
            Atom::One => write!(f, "one"),
        }
    }
}

const ATOM_NAMES: &[(&str, Atom)] = &[
    ("Pbar", Atom::Named(NamedForm::Pbar)),
    ("pbar", Atom::Named(NamedForm::Pbar)),
    ("R", Atom::Named(NamedForm::R)),
    ("E", Atom::Named(NamedForm::E)),
    ("psi", Atom::Named(NamedForm::Psi)),
    ("rho", Atom::Named(NamedForm::Rho)),
    ("h", Atom::Named(NamedForm::H)),
    ("g", Atom::Named(NamedForm::G)),
    ("j2", Atom::Named(NamedForm::J2)),
    ("F", Atom::Named(NamedForm::F)),
    ("theta0", Atom::Named(NamedForm::Theta0)),
    ("zero", Atom::Zero),
    ("one", Atom::One),
    ("sptbar", Atom::Statistic(Statistic::Sptbar)),
    ("Sbar", Atom::Statistic(Statistic::Sptbar)),
    ("spt", Atom::Statistic(Statistic::Spt)),
    ("m2spt", Atom::Statistic(Statistic::M2spt)),
    ("S2", Atom::Statistic(Statistic::S2)),
    ("Mbar", Atom::Statistic(Statistic::Mbar)),
    ("M2", Atom::Statistic(Statistic::M2)),
];

/// `atom(m tau)^power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub atom: Atom,
    pub rescale: u64,
    pub power: i64,
}

impl Factor {
    fn valuation(&self) -> i64 {
        self.power * self.rescale as i64 * self.atom.valuation()
    }

    /// Expansion with window ending at `bound` (or beyond).
    fn expand(&self, bound: i64) -> Result<TruncatedSeries> {
        if self.power == 0 {
            return Ok(TruncatedSeries::one().truncate(bound));
        }
        let m = self.rescale as i64;
        let v = self.atom.valuation();
        // A power p of a series with valuation v and bound b has bound
        // b + (p - 1) v, also for negative p.
        let need = bound.div_euclid(m) + 1 - (self.power - 1) * v;
        let base = self.atom.expand(need.max(v + 1))?;
        Ok(base.rescale(self.rescale).pow_int(self.power)?.truncate(bound))
    }
}

/// A product of rescaled integer powers of named forms, e.g.
/// `rho8*R^-15` or `E*Pbar^-7`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormExpr {
    pub factors: Vec<Factor>,
}

impl FormExpr {
    pub fn named(form: NamedForm) -> Self {
        FormExpr { factors: vec![Factor { atom: Atom::Named(form), rescale: 1, power: 1 }] }
    }

    pub fn valuation(&self) -> i64 {
        self.factors.iter().map(Factor::valuation).sum()
    }

    /// The whole expression as one eta quotient, if every factor is one.
    pub fn as_eta_quotient(&self) -> Option<EtaQuotient> {
        let mut q = EtaQuotient::default();
        for f in &self.factors {
            q = q.mul(&f.atom.eta_quotient()?.rescale(f.rescale).pow(f.power));
        }
        Some(q)
    }

    /// Exact expansion with window ending exactly at `bound`.
    pub fn expand(&self, bound: i64) -> Result<TruncatedSeries> {
        if self.factors.iter().any(|f| f.atom == Atom::Zero && f.power != 0) {
            if self.factors.iter().any(|f| f.atom == Atom::Zero && f.power < 0) {
                return Err(Error::NonUnit);
            }
            return Ok(TruncatedSeries::zero_to(bound));
        }
        let (eta, rest): (Vec<&Factor>, Vec<&Factor>) =
            self.factors.iter().partition(|f| f.atom.eta_quotient().is_some());
        let mut parts: Vec<(i64, Box<dyn Fn(i64) -> Result<TruncatedSeries> + '_>)> = Vec::new();
        if !eta.is_empty() {
            let q = eta.iter().fold(EtaQuotient::default(), |acc, f| {
                acc.mul(&f.atom.eta_quotient().expect("partitioned").rescale(f.rescale).pow(f.power))
            });
            let v = q.leading_exponent()?;
            parts.push((v, Box::new(move |b| q.expand(b))));
        }
        for f in rest {
            parts.push((f.valuation(), Box::new(move |b| f.expand(b))));
        }
        let total: i64 = parts.iter().map(|p| p.0).sum();
        let mut acc = TruncatedSeries::one();
        for (v, expand) in &parts {
            acc = acc.mul(&expand(bound - (total - v))?);
        }
        Ok(acc.truncate(bound))
    }
}

impl fmt::Display for FormExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "one");
        }
        for (i, fac) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", fac.atom)?;
            if fac.rescale != 1 {
                write!(f, "{}", fac.rescale)?;
            }
            if fac.power != 1 {
                write!(f, "^{}", fac.power)?;
            }
        }
        Ok(())
    }
}

impl FromStr for FormExpr {
    type Err = Error;

    /// Grammar: `factor ('*' factor)*`, `factor = NAME [digits] ['^' INT]`,
    /// where the digits rescale `tau`. Names match longest first.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty form expression".into()));
        }
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let (name, atom) = ATOM_NAMES
                .iter()
                .filter(|(n, _)| part.starts_with(n))
                .max_by_key(|(n, _)| n.len())
                .ok_or_else(|| Error::UnknownForm(part.clone()))?;
            let rest = &part[name.len()..];
            let (scale, power) = match rest.split_once('^') {
                Some((scale, power)) => (scale, Some(power)),
                None => (rest, None),
            };
            let rescale = if scale.is_empty() {
                1
            } else {
                match scale.parse::<u64>() {
                    Ok(m) if m > 0 => m,
                    _ => return Err(Error::UnknownForm(part.clone())),
                }
            };
            let power = match power {
                None => 1,
                Some(p) => p.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {part:?}")))?,
            };
            factors.push(Factor { atom: *atom, rescale, power });
        }
        Ok(FormExpr { factors })
    }
}
