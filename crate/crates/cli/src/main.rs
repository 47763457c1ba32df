mod commands;
mod config;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use palg::decide::{Strategy, Variety};
use palg::{Error, Rank};

use config::{Config, FileConfig, Format, Overrides};

/// Finite distributive p-algebras: free algebras, normal forms, identities
/// and quasi-identities, congruence duals.
///
/// Exit status: 0 when the check holds, 1 when it fails or the input is
/// malformed, 2 when a size cap or the valuation budget is exceeded.
#[derive(Parser, Debug)]
#[command(name = "palg", version)]
struct Cli {
    /// TOML file with defaults (table-cap, poset-cap, oracle-cap, budget, seed, format).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, env = "PALG_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true, env = "PALG_TABLE_CAP")]
    table_cap: Option<usize>,
    #[arg(long, global = true, env = "PALG_POSET_CAP")]
    poset_cap: Option<usize>,
    #[arg(long, global = true, env = "PALG_ORACLE_CAP")]
    oracle_cap: Option<usize>,
    /// Maximal number of valuations (or search nodes) a sweep may visit.
    #[arg(long, global = true, env = "PALG_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Counts and builds the free algebra F_n(k).
    Free {
        /// Variety index: a number or `omega`.
        #[arg(short = 'n')]
        n: Rank,
        #[arg(short = 'k')]
        k: usize,
        /// Print the DOT of (J, ≥) as well.
        #[arg(long)]
        export: bool,
        /// Only count join-irreducibles.
        #[arg(long)]
        count_only: bool,
    },
    /// Normal form of a term in Pa_n.
    Nf {
        term: String,
        #[arg(short = 'n', default_value = "omega")]
        n: Rank,
    },
    /// Decides an identity.
    Eq {
        lhs: String,
        rhs: String,
        /// `pa` or `paN`, e.g. `pa2`.
        #[arg(long, default_value = "pa")]
        variety: Variety,
    },
    /// Checks a quasi-identity, read from a JSON file, in one algebra.
    Qi {
        file: PathBuf,
        /// si:n, chain:m, free:n,k, dist:s or a JSON path.
        #[arg(long)]
        algebra: String,
        /// `pruned` or `exhaustive`.
        #[arg(long, default_value = "pruned")]
        strategy: Strategy,
    },
    /// The subdirectly irreducible algebra with n atoms.
    Si { n: usize },
    /// Completely meet-irreducible congruences and their two orders.
    Dual { algebra: String },
    /// Structural completeness of Pa_n.
    Report { n: Rank },
    /// Runs the structural law checks on an algebra.
    Audit { algebra: String },
    /// Compares normal forms with brute force on random term pairs.
    Oracle {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

fn run(cli: Cli) -> Result<(commands::Output, Format), Error> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let cfg = Config::resolve(
        file,
        Overrides {
            table_cap: cli.table_cap,
            poset_cap: cli.poset_cap,
            oracle_cap: cli.oracle_cap,
            budget: cli.budget,
            seed: cli.seed,
            format: cli.format,
        },
    )?;
    let l = &cfg.limits;
    let out = match cli.cmd {
        Cmd::Free {
            n,
            k,
            export,
            count_only,
        } => commands::free(n, k, export, count_only, l)?,
        Cmd::Nf { term, n } => commands::nf(&term, n, l)?,
        Cmd::Eq { lhs, rhs, variety } => commands::eq(&lhs, &rhs, variety, l)?,
        Cmd::Qi {
            file,
            algebra,
            strategy,
        } => commands::qi(&file, &algebra, strategy, l)?,
        Cmd::Si { n } => commands::si(n, l)?,
        Cmd::Dual { algebra } => commands::dual(&algebra, l)?,
        Cmd::Report { n } => commands::report(n, l)?,
        Cmd::Audit { algebra } => commands::audit_cmd(&algebra, l)?,
        Cmd::Oracle { trials } => commands::oracle(trials, cfg.seed, l)?,
    };
    Ok((out, cfg.format))
}

fn error_json(e: &Error) -> serde_json::Value {
    match e {
        Error::CapExceeded { what, limit, actual } => {
            json!({ "error": "cap-exceeded", "what": what, "limit": limit.to_string(), "actual": actual.to_string(), "message": e.to_string() })
        }
        Error::BudgetExceeded { needed, budget } => {
            json!({ "error": "budget-exceeded", "needed": needed.to_string(), "budget": budget.to_string(), "message": e.to_string() })
        }
        Error::Syntax { pos, .. } | Error::UnknownIdentifier { pos, .. } => {
            json!({ "error": "syntax", "position": pos, "message": e.to_string() })
        }
        _ => json!({ "error": "invalid", "message": e.to_string() }),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } | Error::BudgetExceeded { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, format)) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("values serialize")),
                Format::Text => print!("{}", out.text),
                Format::Dot => match &out.dot {
                    Some(d) => print!("{d}"),
                    None => {
                        eprintln!(
                            "{}",
                            error_json(&Error::Invalid("this command has no DOT output".into()))
                        );
                        return ExitCode::from(1);
                    }
                },
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code(&e))
        }
    }
}
