use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polynormal::cli::{self, Outcome, RunConfig};
use polynormal::Error;

#[derive(Parser)]
#[command(
    name = "pnd",
    version,
    about = "Polynomial-normal densities: transforms, diagnosis and normal-factor splits"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Bisection tolerance on theta
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long = "quadrature-order", global = true)]
    quadrature_order: Option<usize>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args)]
struct Input {
    /// Density JSON file
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct ConvArgs {
    #[arg(long)]
    f: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[arg(long)]
    z: PathBuf,
    /// Grid points per axis over b ± 4
    #[arg(long, default_value_t = 5)]
    points: usize,
}

#[derive(Args)]
struct Example4Args {
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    a11: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    a12: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    a22: f64,
    #[arg(long = "n-max", default_value_t = 50)]
    n_max: usize,
    /// Density slice along the witness curve
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Polynomial JSON file
    #[arg(long)]
    poly: PathBuf,
    #[arg(long, default_value_t = 200)]
    starts: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a density and scan it for negative values
    Validate(Input),
    /// Characteristic function of a density
    Charfn(Input),
    /// Density of a characteristic function
    Invcharfn(Input),
    /// Zero search and leading-coefficient conditions
    Diagnose(Input),
    /// Split off a normal factor
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check f = y * z numerically
    VerifyConv(ConvArgs),
    /// Reproduce the indecomposable bivariate example
    Example4(Example4Args),
    /// Search for a product-of-quadratics factorization
    Probe(ProbeArgs),
    /// Verification commands
    Verify {
        #[command(subcommand)]
        which: VerifyCommand,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    Conv(ConvArgs),
    Example4(Example4Args),
    Probe(ProbeArgs),
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(fs::read_to_string(path)?)
}

fn with_file(path: &Path, f: impl FnOnce(&str) -> Outcome) -> Outcome {
    match read(path) {
        Ok(text) => f(&text),
        Err(e) => cli::error_outcome(&e),
    }
}

fn conv(a: &ConvArgs, cfg: &RunConfig) -> Outcome {
    match (read(&a.f), read(&a.y), read(&a.z)) {
        (Ok(f), Ok(y), Ok(z)) => cli::cmd_verify_conv(&f, &y, &z, a.points, cfg),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => cli::error_outcome(&e),
    }
}

fn example4(a: &Example4Args, cfg: &RunConfig) -> (Outcome, Option<PathBuf>) {
    (
        cli::cmd_example4(a.a11, a.a12, a.a22, a.n_max, cfg),
        a.csv.clone(),
    )
}

fn probe(a: &ProbeArgs, cfg: &RunConfig) -> Outcome {
    with_file(&a.poly, |p| cli::cmd_probe(p, a.starts, cfg))
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let level = match args.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    let mut cfg = RunConfig {
        tol: args.global.tol,
        seed: args.global.seed,
        out: args.global.out.clone(),
        quadrature_order: args.global.quadrature_order,
        verbosity: args.global.verbose,
    };
    let mut csv_path = None;
    let outcome = match &args.command {
        Command::Validate(i) => with_file(&i.input, |t| cli::cmd_validate(t, &cfg)),
        Command::Charfn(i) => with_file(&i.input, |t| cli::cmd_charfn(t, &cfg)),
        Command::Invcharfn(i) => with_file(&i.input, |t| cli::cmd_invcharfn(t, &cfg)),
        Command::Diagnose(i) => with_file(&i.input, |t| cli::cmd_diagnose(t, &cfg)),
        Command::Decompose {
            input,
            theta,
            output,
        } => {
            if output.is_some() {
                cfg.out = output.clone();
            }
            with_file(&input.input, |t| cli::cmd_decompose(t, *theta, &cfg))
        }
        Command::VerifyConv(a)
        | Command::Verify {
            which: VerifyCommand::Conv(a),
        } => conv(a, &cfg),
        Command::Example4(a)
        | Command::Verify {
            which: VerifyCommand::Example4(a),
        } => {
            let (o, p) = example4(a, &cfg);
            csv_path = p;
            o
        }
        Command::Probe(a)
        | Command::Verify {
            which: VerifyCommand::Probe(a),
        } => probe(a, &cfg),
    };
    let text = outcome.render();
    let written = match &cfg.out {
        Some(path) => fs::write(path, &text),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r,
        },
    };
    let written = written.and_then(|_| match (&csv_path, &outcome.csv) {
        (Some(path), Some(csv)) => fs::write(path, csv),
        _ => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("pnd: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if outcome.code != 0 {
        if let Some(msg) = outcome.json.get("error").and_then(|v| v.as_str()) {
            eprintln!("pnd: {msg}");
        }
    }
    ExitCode::from(outcome.code as u8)
}
