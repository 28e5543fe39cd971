//! The verification harness: every congruence, eigenform relation and
//! identity becomes a parameterized check that produces a
//! [`CongruenceReport`].
//!
//! Checks draw their inputs from a shared [`Context`], which caches named
//! forms, statistics and their integer powers at the largest bound any
//! check asked for. A [`Perturbation`] can be installed in the context to
//! corrupt a single coefficient of one input, which is how the harness
//! tests itself.

mod context;
mod eigen;
mod lemmas;
mod lifts;
mod theorems;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numthy::is_odd_prime;
use crate::series::{Mismatch, TruncatedSeries};

pub use context::{Context, Need, Perturbation, Source};
pub use eigen::{verify_eigenform, Eigenform};
pub use lemmas::{verify_lemma, LemmaId};
pub use lifts::{
    lift_expansion, verify_basis_decomposition, verify_hauptmodul, verify_parity_prop, verify_shimura_identities,
    BasisCase, LiftTerm, ParityValues, S7_RHO8_R15, S7_RHO8_R31,
};
pub use theorems::{alpha, beta, gamma, verify_theorem, TheoremId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        })
    }
}

/// Smallest failing exponent with both sides, reduced modulo the check's
/// modulus or exact for identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub exponent: i64,
    pub lhs: String,
    pub rhs: String,
}

impl From<Mismatch> for Failure {
    fn from(m: Mismatch) -> Self {
        Failure { exponent: m.exponent, lhs: m.lhs.to_string(), rhs: m.rhs.to_string() }
    }
}

impl Failure {
    fn values(exponent: i64, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        Failure { exponent, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }

    /// Errors that locate a bad coefficient become failures at that exponent.
    fn from_error(e: &Error) -> Option<Self> {
        match *e {
            Error::NotInSpan { exponent } | Error::NotPolynomialInHauptmodul { exponent } => {
                Some(Failure::values(exponent, "nonzero residual", 0))
            }
            Error::NotDecimable { exponent, .. } => Some(Failure::values(exponent, "nonzero off progression", 0)),
            _ => None,
        }
    }
}

/// Structured outcome of one check.
///
/// A failing report carries `first_failure` when the failure is located at
/// an exponent and `note` when the computation itself failed. A skipped
/// report gives its reason in `note`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub check_id: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub first_failure: Option<Failure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub elapsed_ms: u64,
}

impl CongruenceReport {
    fn new(check_id: impl Into<String>, params: Params) -> Self {
        CongruenceReport {
            check_id: check_id.into(),
            params: params.0,
            status: Status::Pass,
            first_failure: None,
            note: None,
            elapsed_ms: 0,
        }
    }

    fn with_failure(mut self, failure: Option<Failure>) -> Self {
        if failure.is_some() {
            self.status = Status::Fail;
        }
        self.first_failure = failure;
        self
    }

    fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.note = Some(reason.into());
        self
    }

    fn errored(mut self, e: &Error) -> Self {
        self.status = Status::Fail;
        self.first_failure = Failure::from_error(e);
        self.note = Some(e.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Copy without timing, for comparing runs.
    pub fn untimed(&self) -> Self {
        CongruenceReport { elapsed_ms: 0, ..self.clone() }
    }

    /// `ell=3 t=64` style summary of the parameters.
    pub fn param_summary(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Ordered parameter map under construction.
#[derive(Clone, Debug, Default)]
pub(crate) struct Params(BTreeMap<String, Value>);

impl Params {
    pub(crate) fn new() -> Self {
        Params::default()
    }

    pub(crate) fn int(mut self, key: &str, v: i64) -> Self {
        self.0.insert(key.into(), Value::from(v));
        self
    }

    pub(crate) fn text(mut self, key: &str, v: impl Into<String>) -> Self {
        self.0.insert(key.into(), Value::from(v.into()));
        self
    }
}

/// First exponent where `lhs` and `rhs` differ, exactly or modulo `m`, on
/// their common window.
pub(crate) fn compare(lhs: &TruncatedSeries, rhs: &TruncatedSeries, m: Option<&BigInt>) -> Result<Option<Failure>> {
    if let Some(m) = m {
        return Ok(lhs.congruent_mod(rhs, m)?.first_failure.map(Failure::from));
    }
    let diff = lhs.sub(rhs)?;
    let first = diff.terms().next().map(|(n, _)| n);
    Ok(first.map(|n| {
        let side = |s: &TruncatedSeries| s.coeff_at(n).map(|c| c.to_string()).unwrap_or_default();
        Failure { exponent: n, lhs: side(lhs), rhs: side(rhs) }
    }))
}

/// Fails unless `s` is certified on `[.., end)`.
pub(crate) fn require_end(s: &TruncatedSeries, end: i64, what: &str) -> Result<()> {
    if s.end() < end {
        return Err(Error::WindowTooSmall(format!("{what} is known below q^{} but q^{} is needed", s.end(), end - 1)));
    }
    Ok(())
}

/// A single runnable unit of the suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Check {
    Theorem { id: TheoremId, ell: i64, n_max: i64 },
    Eigenform { form: Eigenform, ell: i64, bound: Option<i64> },
    Lemma { id: LemmaId, ell: Option<i64>, bound: i64 },
    Basis { case: BasisCase, ell: i64 },
    Hauptmodul { ell: i64, bound: Option<i64> },
    Shimura { window: i64 },
    Parity { ell: i64 },
}

impl Check {
    /// Inputs this check will ask the context for.
    pub fn needs(&self) -> Vec<Need> {
        match *self {
            Check::Theorem { id, ell, n_max } => theorems::needs(id, ell, n_max),
            Check::Eigenform { form, ell, bound } => eigen::needs(form, ell, bound),
            Check::Lemma { id, ell, bound } => lemmas::needs(id, ell, bound),
            Check::Basis { case, ell } => lifts::basis_needs(case, ell),
            Check::Hauptmodul { ell, bound } => lifts::hauptmodul_needs(ell, bound),
            Check::Shimura { window } => lifts::shimura_needs(window),
            Check::Parity { ell } => lifts::parity_needs(ell),
        }
    }

    pub fn run(&self, ctx: &Context) -> Vec<CongruenceReport> {
        let start = Instant::now();
        let mut reports = match *self {
            Check::Theorem { id, ell, n_max } => verify_theorem(ctx, id, ell, n_max).unwrap_or_else(|e| {
                vec![CongruenceReport::new(id.name(), Params::new().int("ell", ell).int("n_max", n_max)).errored(&e)]
            }),
            Check::Eigenform { form, ell, bound } => vec![verify_eigenform(ctx, form, ell, None, bound)],
            Check::Lemma { id, ell, bound } => vec![verify_lemma(ctx, id, ell, bound)],
            Check::Basis { case, ell } => vec![verify_basis_decomposition(ctx, case, ell)],
            Check::Hauptmodul { ell, bound } => vec![verify_hauptmodul(ctx, ell, bound)],
            Check::Shimura { window } => verify_shimura_identities(ctx, window),
            Check::Parity { ell } => vec![verify_parity_prop(ctx, ell)],
        };
        let elapsed = start.elapsed().as_millis() as u64;
        for r in &mut reports {
            r.elapsed_ms = elapsed;
        }
        reports
    }
}

/// Names accepted on the command line for selecting checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Theorem(TheoremId),
    Eigenform(Eigenform),
    Lemma(LemmaId),
    Basis,
    Hauptmodul,
    Shimura,
    Parity,
}

impl CheckKind {
    pub fn all() -> Vec<CheckKind> {
        let mut v: Vec<CheckKind> = TheoremId::ALL.iter().map(|&t| CheckKind::Theorem(t)).collect();
        v.extend(Eigenform::ALL.iter().map(|&f| CheckKind::Eigenform(f)));
        v.extend(LemmaId::ALL.iter().map(|&l| CheckKind::Lemma(l)));
        v.extend([CheckKind::Basis, CheckKind::Hauptmodul, CheckKind::Shimura, CheckKind::Parity]);
        v
    }

    pub fn name(&self) -> String {
        match self {
            CheckKind::Theorem(t) => t.name().into(),
            CheckKind::Eigenform(f) => format!("eigen:{}", f.name()),
            CheckKind::Lemma(l) => l.name().into(),
            CheckKind::Basis => "basis".into(),
            CheckKind::Hauptmodul => "hauptmodul".into(),
            CheckKind::Shimura => "shimura".into(),
            CheckKind::Parity => "parity".into(),
        }
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(t) = s.parse() {
            return Ok(CheckKind::Theorem(t));
        }
        if let Ok(l) = s.parse() {
            return Ok(CheckKind::Lemma(l));
        }
        if let Ok(f) = s.strip_prefix("eigen:").unwrap_or(s).parse() {
            return Ok(CheckKind::Eigenform(f));
        }
        match s {
            "basis" => Ok(CheckKind::Basis),
            "hauptmodul" => Ok(CheckKind::Hauptmodul),
            "shimura" => Ok(CheckKind::Shimura),
            "parity" => Ok(CheckKind::Parity),
            _ => Err(Error::InvalidArgument(format!("unknown check id {s:?}"))),
        }
    }
}

/// Options shared by [`plan`]; `None` means the per-check default.
#[derive(Clone, Debug, Default)]
pub struct PlanOptions {
    pub n_max: Option<i64>,
    pub bound: Option<i64>,
}

/// Default bound for the lemma suite.
pub const LEMMA_BOUND: i64 = 2000;
/// Lift window for the Shimura identities.
pub const SHIMURA_WINDOW: i64 = 60;
/// Largest series index a theorem check may need; `n_max` is capped to fit.
pub const THEOREM_INDEX_CAP: i64 = 60_000;

/// Expands a check kind over the given primes. Primes excluded by a
/// theorem's own hypotheses are a configuration error.
pub fn plan(kind: CheckKind, ells: &[i64], opts: &PlanOptions) -> Result<Vec<Check>> {
    for &ell in ells {
        if !is_odd_prime(ell) {
            return Err(Error::NotOddPrime(ell));
        }
    }
    let mut out = Vec::new();
    match kind {
        CheckKind::Theorem(id) => {
            for &ell in ells {
                id.admits(ell)?;
                let n_max = opts.n_max.unwrap_or(id.default_n_max());
                if n_max < 1 {
                    return Err(Error::InvalidArgument("n_max must be at least 1".into()));
                }
                out.push(Check::Theorem { id, ell, n_max });
            }
        }
        CheckKind::Eigenform(form) => {
            out.extend(ells.iter().map(|&ell| Check::Eigenform { form, ell, bound: opts.bound }));
        }
        CheckKind::Lemma(id) => {
            let bound = opts.bound.unwrap_or(LEMMA_BOUND);
            if id.per_prime() {
                out.extend(ells.iter().map(|&ell| Check::Lemma { id, ell: Some(ell), bound }));
            } else {
                out.push(Check::Lemma { id, ell: None, bound });
            }
        }
        CheckKind::Basis => {
            for &ell in ells {
                out.push(Check::Basis { case: BasisCase::R31, ell });
                out.push(Check::Basis { case: BasisCase::R15, ell });
            }
        }
        CheckKind::Hauptmodul => {
            out.extend(ells.iter().map(|&ell| Check::Hauptmodul { ell, bound: opts.bound }));
        }
        CheckKind::Shimura => out.push(Check::Shimura { window: SHIMURA_WINDOW }),
        CheckKind::Parity => out.extend(ells.iter().map(|&ell| Check::Parity { ell })),
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn primes(self) -> &'static [i64] {
        match self {
            Profile::Quick => &[3, 5, 7],
            Profile::Full => &[3, 5, 7, 11, 13, 17, 23, 31, 41],
        }
    }

    /// Every check of the profile in report order.
    pub fn checks(self) -> Vec<Check> {
        let primes = self.primes();
        let quick = self == Profile::Quick;
        let mut out = Vec::new();
        for kind in CheckKind::all() {
            let mut opts = PlanOptions::default();
            let ells: Vec<i64> = match kind {
                CheckKind::Theorem(id) => {
                    opts.n_max = Some(if quick { 50 } else { id.default_n_max() });
                    primes.iter().copied().filter(|&l| id.admits(l).is_ok()).collect()
                }
                // Windows of 50 output coefficients grow like ell^2.
                CheckKind::Eigenform(_) => primes.iter().copied().filter(|&l| l <= 13).collect(),
                CheckKind::Hauptmodul => primes.iter().copied().filter(|&l| l <= 13).collect(),
                CheckKind::Basis => primes.iter().copied().filter(|&l| l <= 13).collect(),
                CheckKind::Lemma(_) => primes.iter().copied().filter(|&l| l <= 7).collect(),
                _ => primes.to_vec(),
            };
            let mut checks = plan(kind, &ells, &opts).expect("profile parameters are admissible");
            for c in &mut checks {
                if let Check::Theorem { ell, n_max, .. } = c {
                    *n_max = (*n_max).min(THEOREM_INDEX_CAP / (*ell * *ell));
                }
            }
            out.extend(checks);
        }
        out
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::InvalidArgument(format!("unknown profile {s:?}"))),
        }
    }
}

/// Runs checks concurrently after computing every shared input once.
/// Reports come back in the order of `checks`.
pub fn run_checks(ctx: &Context, checks: &[Check]) -> Vec<CongruenceReport> {
    let needs: Vec<Need> = checks.iter().flat_map(Check::needs).collect();
    ctx.prefetch(&needs);
    let groups: Vec<Vec<CongruenceReport>> = checks.par_iter().map(|c| c.run(ctx)).collect();
    groups.into_iter().flatten().collect()
}

pub fn run_all(ctx: &Context, profile: Profile) -> Vec<CongruenceReport> {
    run_checks(ctx, &profile.checks())
}

/// Fixed-width table of the reports.
pub fn render_table(reports: &[CongruenceReport]) -> String {
    let mut out = String::new();
    let width = reports.iter().map(|r| r.check_id.len()).max().unwrap_or(5).max(5);
    out.push_str(&format!("{:<width$}  {:<7}  {:>8}  details\n", "check", "status", "ms"));
    for r in reports {
        let mut details = r.param_summary();
        if let Some(f) = &r.first_failure {
            details.push_str(&format!("  first failure at q^{}: {} vs {}", f.exponent, f.lhs, f.rhs));
        }
        if let Some(note) = &r.note {
            details.push_str(&format!("  ({note})"));
        }
        out.push_str(&format!("{:<width$}  {:<7}  {:>8}  {}\n", r.check_id, r.status.to_string(), r.elapsed_ms, details));
    }
    let pass = reports.iter().filter(|r| r.status == Status::Pass).count();
    let fail = reports.iter().filter(|r| r.status == Status::Fail).count();
    let skip = reports.len() - pass - fail;
    out.push_str(&format!("{pass} passed, {fail} failed, {skip} skipped\n"));
    out
}
