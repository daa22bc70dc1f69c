use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fatpoint_cli::commands::{self, Report};
use fatpoint_cli::config::{Format, RunConfig, DEFAULT_MAX_MATRIX_ENTRIES, DEFAULT_SEED};
use fatpoint_cli::exit;
use fatpoint_cli::parse::parse_range;
use fatpoint_core::gfmat::DEFAULT_PRIME;
use fatpoint_core::interp::DEFAULT_TRIALS;
use fatpoint_core::linsys::Placement;

/// Dimensions of linear systems of plane curves with assigned multiple points.
#[derive(Parser, Debug)]
#[command(name = "fatpoint", version, allow_negative_numbers = true)]
struct Cli {
    /// Prime modulus for interpolation matrices
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    /// Run seed; each trial derives its own point seed from it
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Independent point samples per certification
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: u32,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "FATPOINT_THREADS", default_value_t = 0)]
    threads: usize,
    /// Newline-delimited JSON certificate store
    #[arg(long, global = true, env = "FATPOINT_STORE")]
    store: Option<PathBuf>,
    /// Size cap on matrices sampled by reduce, bound and sweep
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_MATRIX_ENTRIES)]
    max_matrix_entries: u64,
    /// Output format (table by default, csv for sweep)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlacementArg {
    Generic,
    Cubic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Euler characteristic and expected dimension
    #[command(allow_negative_numbers = true)]
    Expdim {
        #[arg(allow_negative_numbers = true)]
        degree: i64,
        /// Multiplicities: `4x10`, `1,2,3`, `-1x12`
        mults: Vec<String>,
    },
    /// Certify nonspeciality by exact rank at sampled points
    #[command(allow_negative_numbers = true)]
    Certify {
        #[arg(allow_negative_numbers = true)]
        degree: Option<i64>,
        mults: Vec<String>,
        #[arg(long, value_enum, default_value = "generic")]
        placement: PlacementArg,
        /// JSON system `{"degree": d, "mults": [...], "tags": [...]}`
        #[arg(long, conflicts_with = "placement")]
        input: Option<PathBuf>,
    },
    /// Twist (d; m^n) and move all points onto a cubic
    #[command(allow_negative_numbers = true)]
    Reduce {
        #[arg(allow_negative_numbers = true)]
        degree: i64,
        n: usize,
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        mu: Option<i64>,
    },
    /// Upper bound on h0 of (d; m^n) from the degeneration
    #[command(allow_negative_numbers = true)]
    Bound {
        #[arg(allow_negative_numbers = true)]
        degree: i64,
        n: usize,
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(long)]
        mu: Option<i64>,
    },
    /// Evaluate (d; m^n) over ranges such as `10..40`
    Sweep { d: String, n: String, m: String },
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    let mut config = RunConfig::new(cli.prime, cli.seed, cli.trials)?;
    config.threads = cli.threads;
    config.store = cli.store;
    config.max_matrix_entries = cli.max_matrix_entries;
    let format = cli.format.unwrap_or(Format::Table);

    match cli.command {
        Command::Expdim { degree, mults } => {
            let s = commands::system_from_args(Some(degree), &mults, None)?;
            commands::expdim(&s, format)
        }
        Command::Certify {
            degree,
            mults,
            placement,
            input,
        } => {
            let mut s = commands::system_from_args(degree, &mults, input.as_deref())?;
            if input.is_none() {
                s = s.placed(match placement {
                    PlacementArg::Generic => Placement::Generic,
                    PlacementArg::Cubic => Placement::OnCubic,
                });
            }
            commands::certify(&s, &config, format)
        }
        Command::Reduce { degree, n, m, mu } => {
            commands::reduce_cmd(degree, n, m, mu, &config, format)
        }
        Command::Bound { degree, n, m, mu } => commands::bound(degree, n, m, mu, &config, format),
        Command::Sweep { d, n, m } => {
            let format = cli.format.unwrap_or(Format::Csv);
            let (report, stats) = commands::sweep(
                parse_range(&d)?,
                parse_range(&n)?,
                parse_range(&m)?,
                &config,
                format,
            )?;
            eprintln!("computed {}, reused {}", stats.computed, stats.reused);
            Ok(report)
        }
    }
}

/// clap reads `-1x12` as a short flag; hand such tokens over with a Unicode
/// minus sign, which the multiplicity parser also accepts.
fn protect_negative_blocks(arg: String) -> String {
    let mut chars = arg.chars();
    let looks_negative =
        chars.next() == Some('-') && chars.next().is_some_and(|c| c.is_ascii_digit());
    if looks_negative && arg.parse::<i64>().is_err() && arg.contains([',', 'x', 'X']) {
        arg.replacen('-', "\u{2212}", 1)
    } else {
        arg
    }
}

fn main() -> ExitCode {
    let args = std::env::args().map(protect_negative_blocks);
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build();
    let result = match pool {
        Ok(pool) => pool.install(|| run(cli)),
        Err(e) => Err(e.into()),
    };
    match result {
        Ok(report) => {
            print!("{}", report.stdout);
            ExitCode::from(report.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::USAGE as u8)
        }
    }
}
