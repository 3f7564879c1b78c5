use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use torsolve_cli::{
    cmd_bound, cmd_certify, cmd_decompose, cmd_enumerate, cmd_solve, parse_document, CliError,
    OutputFormat,
};
use torsolve_core::SolveOptions;

#[derive(Parser)]
#[command(
    name = "torsolve",
    version,
    about = "Torsion points and one-dimensional torsion cosets on subvarieties of the multiplicative torus"
)]
struct Cli {
    /// Read the input document from this file instead of stdin
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,

    /// Worker threads for the scan (defaults to all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan torsion orders, certify cosets, and report everything found
    Solve {
        /// Highest order to scan; clamped to the certified bound
        #[arg(long)]
        cap: Option<u64>,

        /// Continue looking for cosets beyond the cap up to this order
        #[arg(long)]
        probe: Option<u64>,

        /// Maximum number of Galois orbits to examine
        #[arg(long)]
        budget: Option<u64>,
    },
    /// List every torsion point on the variety up to a cap, each tested exactly
    Enumerate {
        /// Highest order to enumerate
        #[arg(long)]
        cap: u64,
    },
    /// Certify the torsion coset through the input point, if one exists
    Certify,
    /// Split the input point into a low-order translate and a short direction
    Decompose,
    /// Certified completeness bound for the input system
    Bound,
}

fn positive(flag: &str, value: Option<u64>) -> Result<(), CliError> {
    if value == Some(0) {
        return Err(CliError::new(flag, "must be positive"));
    }
    Ok(())
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::new("input", format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| CliError::new("input", format!("cannot read stdin: {e}")))?;
            Ok(buffer)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, i32), CliError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::new("--jobs", "must be positive"));
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let doc = parse_document(&read_input(&cli.input)?)?;
    match &cli.command {
        Command::Solve { cap, probe, budget } => {
            positive("--cap", *cap)?;
            positive("--probe", *probe)?;
            positive("--budget", *budget)?;
            let mut options = SolveOptions {
                cap: *cap,
                probe: *probe,
                ..SolveOptions::default()
            };
            if let Some(b) = *budget {
                options.budget = b;
            }
            cmd_solve(&doc, &options, cli.format)
        }
        Command::Enumerate { cap } => {
            positive("--cap", Some(*cap))?;
            cmd_enumerate(&doc, *cap, cli.format)
        }
        Command::Certify => cmd_certify(&doc, cli.format),
        Command::Decompose => cmd_decompose(&doc, cli.format),
        Command::Bound => cmd_bound(&doc, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((output, code)) => {
            println!("{output}");
            ExitCode::from(code as u8)
        }
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(2)
        }
    }
}
