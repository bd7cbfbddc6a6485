//! `primesine` — evaluate the sine-product prime formulas from the shell.
//!
//! Exit codes: 0 success; 1 a verification sweep or benchmark found a
//! disagreement; 2 usage error (bad flags, invalid input); 3 a configured
//! cap or width limit refused the request.

mod output;

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{BenchRow, OutputFormat, OutputRecord, Rendered};
use primesine::formulas::{
    chi_all_integers, chi_primes_only, omega_formula, pi_v1, pi_v2, PrimeSource,
};
use primesine::indicator::factor_dump;
use primesine::oracle::{sieve, PrimeTable};
use primesine::precision::{error_profile, find_first_misclassification};
use primesine::verify::run_verify;
use primesine::{Caps, Error, EvalStrategy};

#[derive(Parser)]
#[command(
    name = "primesine",
    version,
    about = "Prime characteristic function, prime counting and distinct-factor \
             counting via the sine-product divisibility indicator",
    propagate_version = true
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Evaluation strategy: naive | reduced | highprec:BITS (BITS >= 53)
    #[arg(
        long,
        global = true,
        env = "PRIMESINE_STRATEGY",
        default_value = "reduced",
        value_parser = parse_strategy
    )]
    strategy: EvalStrategy,

    /// Output format
    #[arg(
        long,
        global = true,
        env = "PRIMESINE_OUTPUT",
        value_enum,
        default_value_t = OutputFormat::Text
    )]
    output: OutputFormat,

    /// Largest modulus for which a sine table may be built
    #[arg(long = "max-table-m", global = true, env = "PRIMESINE_MAX_TABLE_M")]
    max_table_m: Option<u64>,

    /// Largest x accepted by the pi formulas
    #[arg(long = "pi-cap", global = true, env = "PRIMESINE_PI_CAP")]
    pi_cap: Option<u64>,

    /// Largest n accepted by the omega formula
    #[arg(long = "omega-cap", global = true, env = "PRIMESINE_OMEGA_CAP")]
    omega_cap: Option<u64>,

    /// Largest limit accepted by the sieve oracle
    #[arg(long = "sieve-cap", global = true, env = "PRIMESINE_SIEVE_CAP")]
    sieve_cap: Option<u64>,

    /// Largest n accepted by the factorization oracle
    #[arg(long = "factorize-cap", global = true, env = "PRIMESINE_FACTORIZE_CAP")]
    factorize_cap: Option<u64>,
}

impl GlobalArgs {
    fn caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(v) = self.max_table_m {
            caps.max_table_modulus = v;
        }
        if let Some(v) = self.pi_cap {
            caps.pi_limit = v;
        }
        if let Some(v) = self.omega_cap {
            caps.omega_limit = v;
        }
        if let Some(v) = self.sieve_cap {
            caps.sieve_limit = v;
        }
        if let Some(v) = self.factorize_cap {
            caps.factorize_limit = v;
        }
        caps
    }
}

fn parse_strategy(s: &str) -> Result<EvalStrategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    /// Product of E_m(n) over every integer m in [2, sqrt(n)]
    Integers,
    /// Product of E_p(n) over only the primes p in [2, sqrt(n)]
    Primes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PiFormArg {
    /// Sum of the all-integers chi
    V1,
    /// Sum of the primes-only chi
    V2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchForm {
    V1,
    V2,
    Sieve,
}

impl BenchForm {
    fn name(self) -> &'static str {
        match self {
            BenchForm::V1 => "v1",
            BenchForm::V2 => "v2",
            BenchForm::Sieve => "sieve",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the prime characteristic function chi(n)
    Chi {
        /// Integer to classify (n >= 2)
        n: u64,
        #[arg(long, value_enum, default_value_t = FormArg::Integers)]
        form: FormArg,
    },
    /// Count the primes <= x by summing chi
    Pi {
        /// Upper end of the count (x >= 2)
        x: u64,
        #[arg(long, value_enum, default_value_t = PiFormArg::V1)]
        form: PiFormArg,
        /// Grow the inner prime table from chi itself instead of the sieve
        /// (v2 only): the count then uses no oracle primes at all
        #[arg(long)]
        bootstrap: bool,
    },
    /// Count the distinct prime factors omega(n)
    Omega {
        /// Integer to factor-count (n >= 2)
        n: u64,
    },
    /// Sweep chi, pi and omega against the classical oracles
    Verify {
        /// Check every n in [2, max]
        #[arg(long)]
        max: u64,
    },
    /// Scan raw-product deviation over a rectangle of (m, n)
    Precision {
        /// Smallest modulus scanned (scan mode only)
        #[arg(long, default_value_t = 2)]
        m_lo: u64,
        /// Largest modulus scanned
        #[arg(long)]
        m_max: u64,
        /// Smallest n scanned (scan mode only)
        #[arg(long, default_value_t = 1)]
        n_lo: u64,
        /// Largest n scanned
        #[arg(long)]
        n_max: u64,
        /// Report only the lexicographically first (m, n) misclassification,
        /// searching from m = 2, n = 1
        #[arg(long)]
        find_first: bool,
        /// Dump every factor of every E_m(n) in the rectangle (never
        /// short-circuits, so exact zeros still show their full context)
        #[arg(long, conflicts_with = "find_first")]
        dump_factors: bool,
    },
    /// Time the counting formulas against the sieve at one x
    Bench {
        #[arg(long)]
        x: u64,
        /// Comma-separated subset of v1,v2,sieve
        #[arg(long, value_enum, value_delimiter = ',', default_value = "v1,v2,sieve")]
        forms: Vec<BenchForm>,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    };
    std::process::exit(code);
}

/// Cap and width refusals are operational limits (exit 3); everything else
/// the library reports is a precondition violation, i.e. a usage error.
fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::TableCapExceeded { .. }
        | Error::CapExceeded { .. }
        | Error::WidthExceeded { .. } => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> primesine::Result<i32> {
    let caps = cli.global.caps();
    let strategy = cli.global.strategy;

    let mut inputs = BTreeMap::new();
    let started = Instant::now();
    let (command, rendered, code): (&'static str, Rendered, i32) = match &cli.command {
        Command::Chi { n, form } => {
            inputs.insert("n", json!(n));
            inputs.insert(
                "form",
                json!(match form {
                    FormArg::Integers => "integers",
                    FormArg::Primes => "primes",
                }),
            );
            let result = match form {
                FormArg::Integers => chi_all_integers(*n, strategy, &caps)?,
                FormArg::Primes => {
                    let table = oracle_table_covering(n.isqrt(), &caps)?;
                    chi_primes_only(*n, strategy, &table, &caps)?
                }
            };
            ("chi", Rendered::Chi(result), 0)
        }
        Command::Pi { x, form, bootstrap } => {
            if *bootstrap && *form != PiFormArg::V2 {
                return Err(Error::InvalidInput(
                    "--bootstrap requires --form v2 (v1 never uses a prime table)".into(),
                ));
            }
            inputs.insert("x", json!(x));
            inputs.insert(
                "form",
                json!(match form {
                    PiFormArg::V1 => "v1",
                    PiFormArg::V2 => "v2",
                }),
            );
            inputs.insert("bootstrap", json!(bootstrap));
            let (result, source) = match (form, bootstrap) {
                (PiFormArg::V1, _) => (pi_v1(*x, strategy, &caps)?, "direct"),
                (PiFormArg::V2, false) => (
                    pi_v2(*x, strategy, PrimeSource::Oracle, &caps)?,
                    "oracle",
                ),
                (PiFormArg::V2, true) => (
                    pi_v2(*x, strategy, PrimeSource::Bootstrap, &caps)?,
                    "bootstrap",
                ),
            };
            ("pi", Rendered::Pi(result, source), 0)
        }
        Command::Omega { n } => {
            inputs.insert("n", json!(n));
            let table = oracle_table_covering(*n, &caps)?;
            let result = omega_formula(*n, strategy, &table, &caps)?;
            ("omega", Rendered::Omega(result), 0)
        }
        Command::Verify { max } => {
            inputs.insert("max", json!(max));
            let report = run_verify(*max, strategy, &caps)?;
            let code = if report.all_agree { 0 } else { 1 };
            ("verify", Rendered::Verify(report), code)
        }
        Command::Precision {
            m_lo,
            m_max,
            n_lo,
            n_max,
            find_first,
            dump_factors,
        } => {
            inputs.insert("m_lo", json!(m_lo));
            inputs.insert("m_max", json!(m_max));
            inputs.insert("n_lo", json!(n_lo));
            inputs.insert("n_max", json!(n_max));
            inputs.insert("find_first", json!(find_first));
            inputs.insert("dump_factors", json!(dump_factors));
            let rendered = if *find_first {
                let witness = find_first_misclassification(strategy, *m_max, *n_max, &caps)?;
                Rendered::FindFirst {
                    m_max: *m_max,
                    n_max: *n_max,
                    witness,
                }
            } else if *dump_factors {
                let mut dumps = Vec::new();
                for m in *m_lo..=*m_max {
                    for n in *n_lo..=*n_max {
                        dumps.push(factor_dump(n, m, strategy, &caps)?);
                    }
                }
                Rendered::Dump(dumps)
            } else {
                let reports =
                    error_profile(*m_lo..=*m_max, *n_lo..=*n_max, strategy, &caps)?;
                Rendered::PrecisionScan(reports)
            };
            ("precision", rendered, 0)
        }
        Command::Bench { x, forms } => {
            inputs.insert("x", json!(x));
            inputs.insert(
                "forms",
                json!(forms.iter().map(|f| f.name()).collect::<Vec<_>>().join(",")),
            );
            let mut rows = Vec::new();
            for form in forms {
                let t = Instant::now();
                let count = match form {
                    BenchForm::V1 => pi_v1(*x, strategy, &caps)?.count,
                    BenchForm::V2 => {
                        pi_v2(*x, strategy, PrimeSource::Oracle, &caps)?.count
                    }
                    BenchForm::Sieve => {
                        if *x < 2 {
                            return Err(Error::InvalidInput(format!(
                                "the formulas are defined for n >= 2, got {x}"
                            )));
                        }
                        sieve(*x, &caps)?.len() as u64
                    }
                };
                rows.push(BenchRow {
                    form: form.name().to_string(),
                    x: *x,
                    count,
                    elapsed_ns: t.elapsed().as_nanos().try_into().unwrap_or(u64::MAX),
                });
            }
            let counts_agree = rows.windows(2).all(|w| w[0].count == w[1].count);
            let code = if counts_agree { 0 } else { 1 };
            ("bench", Rendered::Bench { rows, counts_agree }, code)
        }
    };
    let elapsed_ns = started.elapsed().as_nanos().try_into().unwrap_or(u64::MAX);

    match cli.global.output {
        OutputFormat::Text => print!("{}", rendered.to_text()),
        OutputFormat::Json => {
            let record = OutputRecord::new(
                command,
                inputs,
                rendered.to_value(),
                strategy,
                elapsed_ns,
            );
            println!("{}", record.to_json_line());
        }
        OutputFormat::Csv => print!("{}", rendered.to_csv(strategy)),
    }
    Ok(code)
}

/// Prime table for the oracle-backed commands: empty when nothing below 2
/// is needed (the empty table still covers bound 1), sieved otherwise.
fn oracle_table_covering(bound: u64, caps: &Caps) -> primesine::Result<PrimeTable> {
    if bound < 2 {
        Ok(PrimeTable::empty())
    } else {
        sieve(bound, caps)
    }
}
