use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freeloop_cli::commands::{cmd_flagloop, cmd_gb, cmd_identities, cmd_intersect, cmd_nf, cmd_verify_su4, Report, RingArgs};
use freeloop_cli::CliError;
use freeloop_ss::engine::DEFAULT_CAP;

/// Exact integer Gröbner bases and the Leray–Serre spectral sequence of the
/// free loop fibration over complete flag manifolds.
///
/// Exit codes: 0 success, 1 verification failed, 2 bad input or missing file,
/// 3 critical-pair guard exceeded, 4 degree cap too small, 5 unsupported rank.
#[derive(Parser)]
#[command(name = "freeloop", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the page computations.
    #[arg(long, env = "FREELOOP_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RingFlags {
    /// Comma-separated variables, largest first (inferred when omitted).
    #[arg(long)]
    vars: Option<String>,
    /// Monomial order, `lex:a>b>c` or `elim[k]:a>b>c`.
    #[arg(long)]
    order: Option<String>,
    /// Abort completion after this many critical pairs.
    #[arg(long)]
    max_pairs: Option<usize>,
}

impl From<RingFlags> for RingArgs {
    fn from(f: RingFlags) -> Self {
        RingArgs { vars: f.vars, order: f.order, max_pairs: f.max_pairs }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Gröbner basis of the generators in a file (one per line).
    Gb {
        input: PathBuf,
        #[command(flatten)]
        ring: RingFlags,
    },
    /// Reduced Gröbner basis of the intersection of two ideals.
    Intersect {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        ring: RingFlags,
    },
    /// Normal form of a polynomial modulo the ideal of a generator file.
    Nf {
        basis: PathBuf,
        poly: String,
        #[command(flatten)]
        ring: RingFlags,
    },
    /// Runs the spectral sequence for SU(n+1)/T^n.
    Flagloop {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
        /// Directory for result.json and manifest.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verifies a stored rank-three result.
    #[command(name = "verify-su4")]
    VerifySu4 { result: PathBuf },
    /// Checks the combinatorial identity grids and seeded samples.
    Identities {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Gb { input, ring } => cmd_gb(&input, &ring.into()),
        Command::Intersect { a, b, ring } => cmd_intersect(&a, &b, &ring.into()),
        Command::Nf { basis, poly, ring } => cmd_nf(&basis, &poly, &ring.into()),
        Command::Flagloop { n, cap, out } => cmd_flagloop(n, cap, out.as_deref()),
        Command::VerifySu4 { result } => cmd_verify_su4(&result),
        Command::Identities { seed, samples } => cmd_identities(seed, samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("json value"));
            } else {
                println!("{}", report.text);
            }
            ExitCode::from(report.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
