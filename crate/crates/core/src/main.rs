use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hcp::harness::cache::PolyCache;
use hcp::harness::sweep::SweepParams;
use hcp::harness::{self, exit, Format};

#[derive(Parser, Debug)]
#[command(name = "hcp", version)]
#[command(about = "Class groups, Hilbert class polynomials and their F_p-roots for inert primes")]
struct Cli {
    /// Output format: json, csv or text
    #[arg(long, global = true, default_value = "text")]
    format: Format,

    /// Hilbert class polynomial cache file
    #[arg(long, global = true, default_value = "./hpoly.cache")]
    cache: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced forms, class number and 2-torsion of Pic(O)
    Classgroup {
        #[arg(short = 'D', long = "disc", allow_hyphen_values = true)]
        disc: i64,
    },
    /// Hilbert class polynomial H_D
    Hpoly {
        #[arg(short = 'D', long = "disc", allow_hyphen_values = true)]
        disc: i64,
    },
    /// Observed and predicted F_p-roots of H_D mod p
    Roots {
        #[arg(short = 'D', long = "disc", allow_hyphen_values = true)]
        disc: i64,
        #[arg(short = 'p', long = "prime")]
        prime: u64,
        /// List the roots (p <= 10^6)
        #[arg(long)]
        list_roots: bool,
    },
    /// Evaluate the nonemptiness criterion only
    Predict {
        #[arg(short = 'D', long = "disc", allow_hyphen_values = true)]
        disc: i64,
        #[arg(short = 'p', long = "prime")]
        prime: u64,
    },
    /// Check every inert pair |D| < p up to the given bounds
    Sweep {
        #[arg(long)]
        max_disc: u64,
        #[arg(long)]
        max_prime: u64,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        list_roots: bool,
    },
}

fn run(cli: Cli) -> hcp::Result<i32> {
    let format = cli.format;
    match cli.command {
        Command::Classgroup { disc } => {
            print!("{}", harness::cmd_classgroup(disc, format)?);
            Ok(exit::SUCCESS)
        }
        Command::Hpoly { disc } => {
            let mut cache = PolyCache::open(&cli.cache)?;
            print!("{}", harness::cmd_hpoly(disc, format, &mut cache)?);
            Ok(exit::SUCCESS)
        }
        Command::Roots { disc, prime, list_roots } => {
            let mut cache = PolyCache::open(&cli.cache)?;
            // roots are listed by default whenever p is within the listing bound
            let list = list_roots || prime <= hcp::gfp::LIST_ROOTS_MAX_P;
            let out = harness::cmd_roots(disc, prime, list, format, &mut cache)?;
            print!("{}", out.text);
            Ok(out.status())
        }
        Command::Predict { disc, prime } => {
            let (text, _) = harness::cmd_predict(disc, prime, format)?;
            print!("{text}");
            Ok(exit::SUCCESS)
        }
        Command::Sweep { max_disc, max_prime, out, list_roots } => {
            let params = SweepParams { max_disc, max_prime, list_roots };
            params.validate().map_err(hcp::Error::Usage)?;
            let mut cache = PolyCache::open(&cli.cache)?;
            let (text, report) = harness::cmd_sweep(params, format, &mut cache, out.as_deref())?;
            print!("{text}");
            if out.is_none() {
                // the report owns stdout, so the summary goes to stderr
                eprintln!("{}", hcp::harness::sweep::summary_line(&report));
            }
            Ok(if report.all_agree() { exit::SUCCESS } else { exit::DISAGREEMENT })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::SUCCESS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(harness::status_for(&e) as u8)
        }
    }
}
