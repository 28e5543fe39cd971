//! Text, JSON and CSV encodings of [`TruncatedSeries`].

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::TruncatedSeries;
use crate::error::{Error, Result};

/// JSON shape of a series: nonzero coefficients only, as exact `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub valuation: i64,
    pub bound: Option<i64>,
    pub coeffs: Vec<(i64, String)>,
}

fn ratio_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl TruncatedSeries {
    /// Line-oriented dump: two header lines, then `exponent<TAB>p/q` for every
    /// exponent from the valuation to the end of the window.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#valuation\t{}", self.valuation);
        match self.bound {
            Some(b) => {
                let _ = writeln!(out, "#bound\t{b}");
            }
            None => out.push_str("#bound\texact\n"),
        }
        for n in self.valuation..self.end() {
            let c = self.coeff_at(n).expect("inside window");
            let _ = writeln!(out, "{n}\t{}", ratio_string(&c));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut bound: Option<Option<i64>> = None;
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("expected a tab in {line:?}")))?;
            match key {
                "#valuation" => {}
                "#bound" => {
                    bound = Some(match value {
                        "exact" => None,
                        v => Some(v.parse().map_err(|_| Error::Parse(format!("bad bound {v:?}")))?),
                    });
                }
                k => {
                    let e: i64 = k.parse().map_err(|_| Error::Parse(format!("bad exponent {k:?}")))?;
                    terms.push((e, parse_ratio(value)?));
                }
            }
        }
        let bound = bound.ok_or_else(|| Error::Parse("missing #bound header".into()))?;
        Ok(Self::from_terms(bound, terms))
    }

    pub fn to_json_repr(&self) -> SeriesJson {
        SeriesJson {
            valuation: self.valuation,
            bound: self.bound,
            coeffs: self.terms().map(|(e, c)| (e, ratio_string(&c))).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_repr()).expect("plain data serializes")
    }

    pub fn from_json_repr(repr: &SeriesJson) -> Result<Self> {
        let terms = repr
            .coeffs
            .iter()
            .map(|(e, c)| Ok((*e, parse_ratio(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_terms(repr.bound, terms))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: SeriesJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_repr(&repr)
    }

    /// `exponent,value` rows for the whole window; integers print bare.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,value\n");
        for n in self.valuation..self.end() {
            let c = self.coeff_at(n).expect("inside window");
            if c.denom().is_one() {
                let _ = writeln!(out, "{n},{}", c.numer());
            } else {
                let _ = writeln!(out, "{n},{}", ratio_string(&c));
            }
        }
        out
    }
}
