use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::NamedForm;
use crate::series::TruncatedSeries;
use crate::spt::Statistic;

/// An input series the harness can cache and perturb.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    Form(NamedForm),
    Stat(Statistic),
}

impl Source {
    pub fn valuation(self) -> i64 {
        match self {
            Source::Form(f) => f.valuation(),
            Source::Stat(s) => s.valuation(),
        }
    }

    fn expand(self, bound: i64) -> Result<TruncatedSeries> {
        match self {
            Source::Form(f) => f.expand(bound),
            Source::Stat(s) => s.series(bound),
        }
    }

    fn reciprocal(self, bound: i64) -> Option<TruncatedSeries> {
        match self {
            Source::Form(f) => f.reciprocal(bound),
            Source::Stat(_) => None,
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Form(n) => write!(f, "{n}"),
            Source::Stat(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(f) = s.parse::<NamedForm>() {
            return Ok(Source::Form(f));
        }
        let stats = [Statistic::Sptbar, Statistic::Spt, Statistic::M2spt, Statistic::S2, Statistic::Mbar, Statistic::M2];
        stats
            .into_iter()
            .find(|st| st.name() == s)
            .map(Source::Stat)
            .ok_or_else(|| Error::UnknownForm(s.to_string()))
    }
}

/// Adds `delta` to the coefficient of `q^exponent` of one source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    pub source: Source,
    pub exponent: i64,
    pub delta: i64,
}

/// A series a check will request: `source^power` known below `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Need {
    pub source: Source,
    pub power: i64,
    pub bound: i64,
}

impl Need {
    pub fn new(source: Source, power: i64, bound: i64) -> Self {
        Need { source, power, bound }
    }

    pub fn form(form: NamedForm, bound: i64) -> Self {
        Need::new(Source::Form(form), 1, bound)
    }

    /// `form(m tau)` below `bound`.
    pub fn rescaled(form: NamedForm, m: i64, bound: i64) -> Self {
        Need::new(Source::Form(form), 1, rescaled_bound(bound, m))
    }

    pub fn stat(stat: Statistic, bound: i64) -> Self {
        Need::new(Source::Stat(stat), 1, bound)
    }

    /// The power (1 or -1) this one is raised from and the bound it is
    /// needed to.
    fn base(&self) -> (i64, i64) {
        let unit = if self.power < 0 { -1 } else { 1 };
        let v = self.source.valuation() * unit;
        (unit, (self.bound - (self.power / unit - 1) * v).max(v + 1))
    }
}

fn rescaled_bound(bound: i64, m: i64) -> i64 {
    bound.div_euclid(m) + 1
}

/// Shared, thread-safe cache of expansions and their powers.
#[derive(Debug, Default)]
pub struct Context {
    perturbation: Option<Perturbation>,
    cache: Mutex<HashMap<(Source, i64), TruncatedSeries>>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn perturbed(p: Perturbation) -> Self {
        Context { perturbation: Some(p), ..Context::default() }
    }

    pub fn perturbation(&self) -> Option<&Perturbation> {
        self.perturbation.as_ref()
    }

    pub fn series(&self, source: Source, bound: i64) -> Result<TruncatedSeries> {
        self.power(source, 1, bound)
    }

    pub fn form(&self, form: NamedForm, bound: i64) -> Result<TruncatedSeries> {
        self.power(Source::Form(form), 1, bound)
    }

    pub fn stat(&self, stat: Statistic, bound: i64) -> Result<TruncatedSeries> {
        self.power(Source::Stat(stat), 1, bound)
    }

    /// `form(m tau)` below `bound`.
    pub fn rescaled(&self, form: NamedForm, m: i64, bound: i64) -> Result<TruncatedSeries> {
        Ok(self.form(form, rescaled_bound(bound, m))?.rescale(m as u64).truncate(bound))
    }

    /// `source^power` with window ending exactly at `bound`.
    pub fn power(&self, source: Source, power: i64, bound: i64) -> Result<TruncatedSeries> {
        if power == 0 {
            return Ok(TruncatedSeries::one().truncate(bound));
        }
        if let Some(s) = self.lookup(source, power, bound) {
            return Ok(s);
        }
        let perturbed = self.perturbation.filter(|p| p.source == source);
        let s = match power {
            1 => {
                let mut s = source.expand(bound)?;
                if let Some(p) = perturbed {
                    let bump = TruncatedSeries::monomial(BigRational::from_integer(BigInt::from(p.delta)), p.exponent);
                    s = s.add(&bump)?;
                }
                s
            }
            -1 => match source.reciprocal(bound).filter(|_| perturbed.is_none()) {
                Some(r) => r,
                None => self.power(source, 1, bound + 2 * source.valuation())?.invert()?,
            },
            _ => {
                let (unit, base_bound) = Need::new(source, power, bound).base();
                self.power(source, unit, base_bound)?.pow_int(power / unit)?
            }
        };
        let out = s.truncate(bound);
        let mut cache = self.cache.lock().expect("cache lock");
        let slot = cache.entry((source, power)).or_insert_with(|| s.clone());
        if slot.end() < s.end() {
            *slot = s;
        }
        Ok(out)
    }

    fn lookup(&self, source: Source, power: i64, bound: i64) -> Option<TruncatedSeries> {
        let cache = self.cache.lock().expect("cache lock");
        cache.get(&(source, power)).filter(|s| s.end() >= bound).map(|s| s.truncate(bound))
    }

    /// Computes every base and then every power at the largest requested
    /// bound, each once. Errors are left for the checks to report.
    pub fn prefetch(&self, needs: &[Need]) {
        let mut bases: BTreeMap<(Source, i64), i64> = BTreeMap::new();
        let mut powers: BTreeMap<(Source, i64), i64> = BTreeMap::new();
        for n in needs.iter().filter(|n| n.power != 0) {
            let (unit, bound) = n.base();
            let b = bases.entry((n.source, unit)).or_insert(i64::MIN);
            *b = (*b).max(bound);
            if n.power != unit {
                let b = powers.entry((n.source, n.power)).or_insert(i64::MIN);
                *b = (*b).max(n.bound);
            }
        }
        bases.into_par_iter().for_each(|((s, unit), b)| {
            let _ = self.power(s, unit, b);
        });
        powers.into_par_iter().for_each(|((s, p), b)| {
            let _ = self.power(s, p, b);
        });
    }
}
