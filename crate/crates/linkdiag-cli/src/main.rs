//! Command-line front end for the linkdiag toolkit.
//!
//! Exit codes: 0 success / affirmative, 1 legitimate negative (no
//! certificate, failed check, nothing found), 2 usage or input error,
//! 3 I/O error. All JSON output is canonical (sorted keys, no insignificant
//! whitespace), so identical invocations produce identical bytes.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use linkdiag::canon::to_canonical_json;
use linkdiag::cert::{certify, verify_certificate, Certificate, CertifyOutcome, EdgeMode};
use linkdiag::circuit::{check_ordering, CircuitOrdering};
use linkdiag::diagram::{LinkingDiagram, PrimeSet};
use linkdiag::present::{koch_presentation, render_presentation};
use linkdiag::search::{
    construct_circular_set, extend_set, find_prime, EdgeConstraint, SearchBudget,
};
use linkdiag::{Error, OddPrime};

#[derive(Parser)]
#[command(
    name = "linkdiag",
    version,
    about = "Linking diagrams of tame prime sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagramFormat {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Strong,
    Weak,
}

impl From<Mode> for EdgeMode {
    fn from(m: Mode) -> EdgeMode {
        match m {
            Mode::Strong => EdgeMode::Strong,
            Mode::Weak => EdgeMode::Weak,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the linking diagram of a prime set
    Diagram {
        #[arg(long)]
        p: u64,
        /// Comma-separated primes congruent to 1 mod p
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: DiagramFormat,
    },
    /// Search for a certificate that the set has cohomological dimension 2
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long, value_enum, default_value = "strong")]
        mode: Mode,
        /// Append the verified certificate to this JSONL catalog
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Test one ordering against the three circuit conditions
    Check {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        /// The ordering to test, as a comma-separated permutation of the set
        #[arg(long, value_delimiter = ',', required = true)]
        ordering: Vec<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Print the Koch presentation read off the diagram
    Present {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Find primes congruent to 1 mod p with prescribed edges to the set
    Search {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        /// Edge constraint: q->7, 7->q, !q->7 or !7->q (repeatable)
        #[arg(long = "require")]
        require: Vec<String>,
        /// How many primes to report
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 100_000)]
        max_candidates: u64,
        #[arg(long, default_value_t = 1 << 32)]
        upper_bound: u64,
    },
    /// Certify the set, then grow it by going-up steps
    Extend {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
        /// How many primes to add
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value = "weak")]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        max_candidates: u64,
        #[arg(long, default_value_t = 1 << 32)]
        upper_bound: u64,
    },
    /// Build a certified strictly circular set of a given even size
    Construct {
        #[arg(long)]
        p: u64,
        /// Target cardinality, even and at least 4
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        max_candidates: u64,
        #[arg(long, default_value_t = 1 << 32)]
        upper_bound: u64,
    },
    /// Re-verify a stored certificate from scratch
    Verify {
        /// Path to a certificate JSON file
        #[arg(long)]
        cert: PathBuf,
    },
}

/// One line of the result catalog.
#[derive(Serialize)]
struct CatalogRecord<'a> {
    timestamp: u64,
    p: u64,
    #[serde(rename = "S")]
    s: &'a [u64],
    certificate: &'a Certificate,
    tool_version: &'static str,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<std::io::Error>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn prime_set(p: u64, set: &[u64]) -> Result<PrimeSet> {
    let p = OddPrime::new(p)?;
    Ok(PrimeSet::new(p, set.iter().copied())?)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Diagram { p, set, format } => {
            let d = LinkingDiagram::build(&prime_set(p, &set)?)?;
            match format {
                DiagramFormat::Json => println!("{}", d.to_json()?),
                DiagramFormat::Dot => print!("{}", d.to_dot()),
            }
            Ok(0)
        }

        Command::Certify {
            p,
            set,
            mode,
            catalog,
        } => {
            let set = prime_set(p, &set)?;
            match certify(&set, mode.into())? {
                CertifyOutcome::Certified(cert) => {
                    let report = verify_certificate(&cert);
                    anyhow::ensure!(report.ok, "freshly built certificate failed verification");
                    if let Some(path) = catalog {
                        append_catalog(&path, &cert)?;
                    }
                    println!("{}", cert.to_json()?);
                    Ok(0)
                }
                CertifyOutcome::NoCircularCore => {
                    let diagnosis = serde_json::json!({
                        "certified": false,
                        "reason": "no strictly circular subset",
                    });
                    println!("{}", to_canonical_json(&diagnosis)?);
                    Ok(1)
                }
                CertifyOutcome::Unreachable { core, unreachable } => {
                    let diagnosis = serde_json::json!({
                        "certified": false,
                        "reason": "primes cannot reach a circular core",
                        "core": core,
                        "unreachable": unreachable,
                    });
                    println!("{}", to_canonical_json(&diagnosis)?);
                    Ok(1)
                }
            }
        }

        Command::Check {
            p,
            set,
            ordering,
            format,
        } => {
            let d = LinkingDiagram::build(&prime_set(p, &set)?)?;
            let ordering = CircuitOrdering::from_primes(&d, &ordering)?;
            let verdict = check_ordering(&d, &ordering)?;
            match format {
                OutputFormat::Json => println!("{}", verdict.to_json()?),
                OutputFormat::Text => {
                    println!("cond_a: {}", verdict.cond_a);
                    println!("cond_b_violations: {:?}", verdict.cond_b_violations);
                    println!(
                        "cond_c: {} (lhs {}, rhs {})",
                        verdict.cond_c, verdict.lhs, verdict.rhs
                    );
                    println!("pass: {}", verdict.pass);
                }
            }
            Ok(if verdict.pass { 0 } else { 1 })
        }

        Command::Present { p, set, format } => {
            let d = LinkingDiagram::build(&prime_set(p, &set)?)?;
            let pres = koch_presentation(&d);
            match format {
                OutputFormat::Json => println!("{}", pres.to_json()?),
                OutputFormat::Text => print!("{}", render_presentation(&pres)),
            }
            Ok(0)
        }

        Command::Search {
            p,
            set,
            require,
            count,
            max_candidates,
            upper_bound,
        } => {
            let set = prime_set(p, &set)?;
            let constraints = require
                .iter()
                .map(|text| text.parse::<EdgeConstraint>())
                .collect::<linkdiag::Result<Vec<_>>>()?;
            let budget = SearchBudget {
                max_candidates,
                upper_bound,
            };
            let found = find_prime(&set, &constraints, count, &budget)?;
            println!("{}", to_canonical_json(&found)?);
            Ok(if found.is_empty() { 1 } else { 0 })
        }

        Command::Extend {
            p,
            set,
            count,
            mode,
            max_candidates,
            upper_bound,
        } => {
            let set = prime_set(p, &set)?;
            let budget = SearchBudget {
                max_candidates,
                upper_bound,
            };
            let Some(cert) = certify(&set, mode.into())?.into_certificate() else {
                let diagnosis = serde_json::json!({
                    "certified": false,
                    "reason": "the base set does not certify",
                });
                println!("{}", to_canonical_json(&diagnosis)?);
                return Ok(1);
            };
            match extend_set(&cert, count, mode.into(), &budget) {
                Ok(wider) => {
                    println!("{}", wider.to_json()?);
                    Ok(0)
                }
                Err(Error::BudgetExhausted(detail)) => {
                    let diagnosis = serde_json::json!({
                        "certified": false,
                        "reason": format!("search budget exhausted: {detail}"),
                    });
                    println!("{}", to_canonical_json(&diagnosis)?);
                    Ok(1)
                }
                Err(other) => Err(other.into()),
            }
        }

        Command::Construct {
            p,
            n,
            max_candidates,
            upper_bound,
        } => {
            let p = OddPrime::new(p)?;
            let budget = SearchBudget {
                max_candidates,
                upper_bound,
            };
            match construct_circular_set(p, n, &budget) {
                Ok(cert) => {
                    println!("{}", cert.to_json()?);
                    Ok(0)
                }
                Err(Error::BudgetExhausted(detail)) => {
                    let diagnosis = serde_json::json!({
                        "certified": false,
                        "reason": format!("search budget exhausted: {detail}"),
                    });
                    println!("{}", to_canonical_json(&diagnosis)?);
                    Ok(1)
                }
                Err(other) => Err(other.into()),
            }
        }

        Command::Verify { cert } => {
            let text =
                fs::read_to_string(&cert).with_context(|| format!("reading {}", cert.display()))?;
            let cert = Certificate::from_json(&text)?;
            let report = verify_certificate(&cert);
            println!("{}", report.to_json()?);
            Ok(if report.ok { 0 } else { 1 })
        }
    }
}

/// Appends one verified certificate as a single JSONL line. The line is
/// written with one O_APPEND write so concurrent appenders cannot interleave.
fn append_catalog(path: &PathBuf, cert: &Certificate) -> Result<()> {
    let report = verify_certificate(cert);
    anyhow::ensure!(report.ok, "refusing to catalog an unverified certificate");
    let record = CatalogRecord {
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        p: cert.p,
        s: &cert.s,
        certificate: cert,
        tool_version: env!("CARGO_PKG_VERSION"),
    };
    let line = to_canonical_json(&record)?;
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening catalog {}", path.display()))?;
    file.write_all(format!("{line}\n").as_bytes())
        .with_context(|| format!("appending to catalog {}", path.display()))?;
    Ok(())
}
