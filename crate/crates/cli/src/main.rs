//! `qhecke`: expansions, Hecke operators, Shimura lifts and the congruence
//! verification suite from the command line.
//!
//! Exit status is 0 when everything requested succeeded (and every check
//! passed), 1 when a check failed, and 2 for bad input.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qhecke::forms::{EtaQuotient, FormExpr};
use qhecke::hecke::{hecke, shimura, HeckeSpec};
use qhecke::spt::PartitionStatistic;
use qhecke::verify::{self, Check, CheckKind, CongruenceReport, Context, PlanOptions, Profile, Status};
use qhecke::{Error, QuadChar, TruncatedSeries};

#[derive(Parser)]
#[command(name = "qhecke", version, about = "Exact q-series, Hecke operators and congruence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a named form, product of forms, or eta quotient.
    Expand {
        #[command(flatten)]
        input: FormInput,
        #[command(flatten)]
        output: Output,
    },
    /// Apply the Hecke operator T(ell^2) in weight lambda + 1/2.
    Hecke {
        #[command(flatten)]
        input: FormInput,
        #[arg(long, default_value_t = 3)]
        ell: i64,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        lambda: i64,
        /// Fundamental discriminant of an extra quadratic character.
        #[arg(long, allow_negative_numbers = true)]
        chi: Option<i64>,
        #[command(flatten)]
        output: Output,
    },
    /// Apply the t-th Shimura lift of weight k.
    Shimura {
        #[command(flatten)]
        input: FormInput,
        #[arg(long, default_value_t = 1)]
        t: i64,
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Run congruence checks.
    Verify(VerifyArgs),
    /// Render a saved JSON report, or print a statistic as an `n,value` table.
    Report {
        /// JSON report written by `verify --json`.
        #[arg(long, conflicts_with = "statistic")]
        input: Option<PathBuf>,
        /// pbar, spt, sptbar, m2spt or mbar_m.
        #[arg(long, requires = "n_max")]
        statistic: Option<String>,
        #[arg(long)]
        n_max: Option<i64>,
    },
}

#[derive(Args)]
struct FormInput {
    /// Form expression such as `Pbar`, `rho8*R^-15` or `E*Pbar^-7`.
    #[arg(long, conflicts_with = "eta", required_unless_present = "eta")]
    form: Option<String>,
    /// Eta quotient such as `eta(2t)^1 * eta(1t)^-2`.
    #[arg(long)]
    eta: Option<String>,
    /// Exclusive end of the input window.
    #[arg(long, default_value_t = 100)]
    bound: i64,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id, e.g. sptbar, garvan_72, L7, eigen:Pbar^-7, basis, shimura.
    #[arg(long = "check", required_unless_present = "all")]
    checks: Vec<String>,
    #[arg(long, conflicts_with = "checks")]
    all: bool,
    /// Comma-separated odd primes; defaults to the profile's primes.
    #[arg(long, value_delimiter = ',')]
    ell: Vec<i64>,
    #[arg(long)]
    n_max: Option<i64>,
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
    profile: ProfileArg,
    /// Write the JSON report here; `-` prints it instead of the table.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Full => Profile::Full,
        }
    }
}

/// What went wrong, and which exit status it maps to.
enum Failure {
    Config(String),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn positive(name: &str, v: i64) -> Result<i64, Failure> {
    if v < 1 {
        return Err(Failure::Config(format!("--{name} must be positive, got {v}")));
    }
    Ok(v)
}

fn load(input: &FormInput) -> Result<TruncatedSeries, Failure> {
    positive("bound", input.bound)?;
    let series = match (&input.form, &input.eta) {
        (Some(f), _) => f.parse::<FormExpr>()?.expand(input.bound)?,
        (None, Some(q)) => q.parse::<EtaQuotient>()?.expand(input.bound)?,
        (None, None) => unreachable!("clap requires one of --form and --eta"),
    };
    Ok(series)
}

fn emit(s: &TruncatedSeries, out: &Output) {
    match out.format {
        Format::Text => println!("{s}"),
        Format::Json => println!("{}", s.to_json()),
        Format::Csv => print!("{}", s.to_csv()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Expand { input, output } => emit(&load(&input)?, &output),
        Command::Hecke { input, ell, lambda, chi, output } => {
            let chi = chi.map_or(QuadChar::Trivial, QuadChar::Kronecker);
            let spec = HeckeSpec::new(ell, lambda, chi)?;
            emit(&hecke(&load(&input)?, &spec)?, &output);
        }
        Command::Shimura { input, t, k, output } => {
            positive("t", t)?;
            emit(&shimura(&load(&input)?, t, k)?, &output);
        }
        Command::Verify(args) => return run_verify(args),
        Command::Report { input, statistic, n_max } => match (input, statistic) {
            (Some(path), _) => {
                let text = fs::read_to_string(&path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                let reports: Vec<CongruenceReport> =
                    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                print!("{}", verify::render_table(&reports));
                if reports.iter().any(|r| r.status == Status::Fail) {
                    return Err(Failure::ChecksFailed);
                }
            }
            (None, Some(name)) => {
                let stat: PartitionStatistic = name.parse()?;
                let n_max = n_max.expect("clap requires --n-max");
                if n_max < 0 {
                    return Err(Failure::Config("--n-max must be non-negative".into()));
                }
                print!("{}", stat.csv(n_max)?);
            }
            (None, None) => return Err(Failure::Config("report needs --input or --statistic".into())),
        },
    }
    Ok(())
}

fn plan_checks(args: &VerifyArgs) -> Result<Vec<Check>, Failure> {
    let profile = Profile::from(args.profile);
    if let Some(n) = args.n_max {
        positive("n-max", n)?;
    }
    if let Some(b) = args.bound {
        positive("bound", b)?;
    }
    let opts = PlanOptions { n_max: args.n_max, bound: args.bound };
    if args.all && args.ell.is_empty() && args.n_max.is_none() && args.bound.is_none() {
        return Ok(profile.checks());
    }
    let kinds: Vec<CheckKind> = if args.all {
        CheckKind::all()
    } else {
        args.checks.iter().map(|c| c.parse()).collect::<Result<_, _>>()?
    };
    let explicit = !args.ell.is_empty();
    let mut checks = Vec::new();
    for kind in kinds {
        let ells: Vec<i64> = match (kind, explicit) {
            (_, true) if !args.all => args.ell.clone(),
            (CheckKind::Theorem(id), _) => {
                let pool = if explicit { &args.ell[..] } else { profile.primes() };
                pool.iter().copied().filter(|&l| id.admits(l).is_ok()).collect()
            }
            (_, true) => args.ell.clone(),
            (_, false) => profile.primes().to_vec(),
        };
        checks.extend(verify::plan(kind, &ells, &opts)?);
    }
    Ok(checks)
}

fn run_verify(args: VerifyArgs) -> Result<(), Failure> {
    let checks = plan_checks(&args)?;
    let reports = verify::run_checks(&Context::new(), &checks);
    let json = serde_json::to_string_pretty(&reports).expect("reports serialize");
    match &args.json {
        Some(p) if p.as_os_str() == "-" => println!("{json}"),
        Some(p) => {
            fs::write(p, format!("{json}\n")).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
            print!("{}", verify::render_table(&reports));
        }
        None => print!("{}", verify::render_table(&reports)),
    }
    if reports.iter().any(|r| r.status == Status::Fail) {
        return Err(Failure::ChecksFailed);
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
