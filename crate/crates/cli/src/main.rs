mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use polyspace::enumeration::DB_DIR_ENV;
use polyspace::gf2::Space;
use polyspace::{Error, LengthVector, Subset};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "polyspace", version, about = "Invariants of planar and spatial polygon spaces")]
struct Cli {
    /// Accepted for compatibility; every subcommand prints JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Lengths {
    /// Length vector, "a/b,c/d,..." or a JSON array of rational strings.
    #[arg(long = "lv")]
    lv: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subset classes, chamber signature and normality of a length vector.
    Classify {
        #[command(flatten)]
        lengths: Lengths,
        /// Also classify this subset, given as a hex bitset (bit i-1 for index i).
        #[arg(long, conflicts_with = "indices")]
        subset: Option<String>,
        /// Also classify this subset, given as comma-separated indices.
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
    },
    /// Betti numbers of the planar polygon space.
    Betti {
        #[command(flatten)]
        lengths: Lengths,
    },
    /// Balanced subalgebra as an exterior algebra modulo monomials.
    Present {
        #[command(flatten)]
        lengths: Lengths,
    },
    /// Mod-2 graded dimensions from the ring presentation.
    Gf2dims {
        #[command(flatten)]
        lengths: Lengths,
        #[arg(long, default_value = "mbar")]
        space: Space,
    },
    /// The degree-one class u with v^2 = vu, and the quotient by it.
    W1 {
        #[command(flatten)]
        lengths: Lengths,
    },
    /// Decides whether two length vectors lie in the same chamber.
    Compare {
        #[arg(long)]
        lv1: String,
        #[arg(long)]
        lv2: String,
    },
    /// Enumerates all chambers for n links into a JSON-lines database.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Database file; defaults to chambers-<n>.jsonl in the database directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = DB_DIR_ENV)]
        db_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Continue from the saved search frontier.
        #[arg(long)]
        resume: bool,
        #[arg(long, default_value_t = 8)]
        split_depth: usize,
        /// Abort after this many seconds (exit code 2); the frontier is kept.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Prune with an LP at every branch point.
        #[arg(long)]
        partial_lp: bool,
        /// Permit n above the default limit.
        #[arg(long)]
        allow_large: bool,
    },
    /// Checks that cohomological keys separate the chambers of a database.
    Audit {
        #[arg(long)]
        db: PathBuf,
        #[arg(long, default_value_t = 0)]
        threads: usize,
        /// Also audit the mod-2 ring invariants.
        #[arg(long)]
        gf2: bool,
    },
    /// Monte Carlo estimate of the non-normal fraction of the simplex.
    SampleNormal {
        #[arg(long, default_value_t = 25)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Chamber and normal chamber counts for a range of n.
    Table {
        #[arg(long, default_value_t = 3)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, env = DB_DIR_ENV)]
        db_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

fn parse_lv(text: &str) -> polyspace::Result<LengthVector> {
    LengthVector::parse(text)
}

fn init_pool(threads: usize) {
    // Ignored if a pool already exists.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

fn run(command: Command) -> polyspace::Result<Value> {
    match command {
        Command::Classify { lengths, subset, indices } => {
            let lv = parse_lv(&lengths.lv)?;
            let chosen = match (subset, indices) {
                (Some(hex), _) => Some(
                    Subset::from_hex(&hex).ok_or_else(|| Error::Parse(format!("bad hex subset {hex:?}")))?,
                ),
                (None, Some(ix)) => {
                    if let Some(&i) = ix.iter().find(|&&i| i == 0 || i > lv.n()) {
                        return Err(Error::IndexOutOfRange { index: i, n: lv.n() });
                    }
                    Some(Subset::from_indices(ix))
                }
                (None, None) => None,
            };
            output::classify(&lv, chosen)
        }
        Command::Betti { lengths } => output::betti(&parse_lv(&lengths.lv)?),
        Command::Present { lengths } => output::present(&parse_lv(&lengths.lv)?),
        Command::Gf2dims { lengths, space } => output::gf2dims(&parse_lv(&lengths.lv)?, space),
        Command::W1 { lengths } => output::w1(&parse_lv(&lengths.lv)?),
        Command::Compare { lv1, lv2 } => output::compare(&parse_lv(&lv1)?, &parse_lv(&lv2)?),
        Command::Enumerate { n, out, db_dir, threads, resume, split_depth, time_limit, partial_lp, allow_large } => {
            let db = out.unwrap_or_else(|| output::default_db(db_dir.as_deref(), n));
            let time_limit = time_limit
                .map(|s| {
                    Duration::try_from_secs_f64(s).map_err(|_| Error::Precondition(format!("bad time limit {s}")))
                })
                .transpose()?;
            let opts = polyspace::enumeration::EnumerationOptions {
                split_depth,
                threads,
                time_limit,
                partial_lp,
                allow_large,
                db: Some(db),
                resume,
            };
            output::enumerate(n, &opts)
        }
        Command::Audit { db, threads, gf2 } => {
            init_pool(threads);
            output::audit(&db, gf2)
        }
        Command::SampleNormal { n, samples, seed } => output::sample_normal(n, samples, seed),
        Command::Table { from, to, db_dir, threads } => {
            init_pool(threads);
            output::table(from, to, db_dir.as_deref(), threads)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            output::print(&output::usage_error(&e.to_string()));
            return ExitCode::from(1);
        }
    };
    let _ = cli.json;
    if !matches!(cli.command, Command::Enumerate { .. } | Command::Audit { .. } | Command::Table { .. }) {
        init_pool(1);
    }
    match run(cli.command) {
        Ok(value) => {
            output::print(&value);
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = output::exit_code(&e);
            output::print(&output::error_object(&e, code));
            ExitCode::from(code)
        }
    }
}
