//! `superjordan`: batch checks over a catalog of nilpotent Jordan superalgebras.

mod commands;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use superjordan::catalog::parse_kind;
use superjordan::corpus::Corpus;
use superjordan::exec::init_threads;
use superjordan::Exec;

use commands::{CliError, Kind, NondegArgs};
use report::{Format, RunReport};

#[derive(Parser)]
#[command(name = "superjordan", version, about = "Identities, invariants, degenerations and Hasse diagrams of nilpotent Jordan superalgebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Data directory with catalog/, certificates/, nondeg/, refutations/ and edges/ (default: shipped data)
    #[arg(long, global = true, value_name = "DIR")]
    catalog: Option<PathBuf>,
    /// Restrict to one type, e.g. "(3,2)" or "3,2"
    #[arg(long = "type", global = true, value_name = "TYPE", value_parser = kind_arg)]
    kind: Option<Kind>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Seed of the closed-set sampler (the only randomized check)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 runs everything sequentially
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Supercommutativity, Jordan superidentity and nilpotency of every entry
    Check,
    /// Regenerate the Obs / nilindex / Aut / Ann columns and diff them
    Invariants,
    /// Verify degeneration certificates
    Degenerate {
        /// Certificate files (.deg)
        files: Vec<PathBuf>,
        /// Verify every shipped certificate
        #[arg(long, conflicts_with = "files")]
        all: bool,
    },
    /// Check non-degeneration tables against the invariant battery
    Nondegenerate {
        /// Table id as stored in the .nd files
        #[arg(long)]
        table: Option<u32>,
        /// Random orbit points for the closed-set evidence check
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Hasse diagrams as DOT (or edge CSV with --format csv)
    Hasse {
        /// Write type_m_n.dot and type_m_n.csv here instead of printing
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Irreducible components from the maximal nodes
    Components,
}

fn kind_arg(s: &str) -> Result<Kind, String> {
    let s = s.trim();
    let wrapped = if s.starts_with('(') { s.to_string() } else { format!("({s})") };
    parse_kind(&wrapped).ok_or_else(|| format!("expected a type like (3,2), got {s:?}"))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let g = cli.global;
    if let Some(n) = g.jobs.filter(|&n| n > 1) {
        init_threads(n);
    }
    let exec = Exec::from_jobs(g.jobs);
    let corpus = match &g.catalog {
        Some(dir) => Corpus::from_dir(dir)?,
        None => Corpus::embedded()?,
    };
    let start = Instant::now();
    let mut report: RunReport = match cli.command {
        Command::Check => commands::check(&corpus, g.kind, exec),
        Command::Invariants => commands::invariants(&corpus, g.kind, exec),
        Command::Degenerate { files, all } => {
            let certs = if all {
                corpus.all_certificates().cloned().collect()
            } else if files.is_empty() {
                return Err(CliError::Usage("give certificate files or --all".into()));
            } else {
                let texts = files
                    .iter()
                    .map(|p| Ok((p.display().to_string(), fs::read_to_string(p).map_err(io_err(p))?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                commands::load_certificates(&corpus, &texts)?
            };
            commands::degenerate(&corpus, &certs, g.kind, exec)
        }
        Command::Nondegenerate { table, samples } => {
            let args = NondegArgs { table, kind: g.kind, samples, seed: g.seed };
            commands::nondegenerate(&corpus, &args, exec)?
        }
        Command::Hasse { out } => {
            let (mut report, artifacts) = commands::hasse(&corpus, g.kind)?;
            report.elapsed = start.elapsed();
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
                    for (stem, dot, csv) in &artifacts {
                        for (ext, body) in [("dot", dot), ("csv", csv)] {
                            let path = dir.join(format!("{stem}.{ext}"));
                            fs::write(&path, body).map_err(io_err(&path))?;
                        }
                    }
                    print!("{}", report.render(g.format));
                }
                None => {
                    // the diagram goes to stdout, the report to stderr
                    for (_, dot, csv) in &artifacts {
                        print!("{}", if g.format == Format::Csv { csv } else { dot });
                    }
                    eprint!("{}", report.render(Format::Table));
                }
            }
            return Ok(report.exit_code());
        }
        Command::Components => commands::components_report(&corpus, g.kind, exec)?,
    };
    report.elapsed = start.elapsed();
    print!("{}", report.render(g.format));
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
