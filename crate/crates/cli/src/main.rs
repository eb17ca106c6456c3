use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

const DEFAULT_TOL: &str = "1e-8";

#[derive(Parser, Debug)]
#[command(name = "torus-embed", version, about = "Embed simplices isometrically into regular polygonal tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an embedding certificate for a simplex.
    Embed {
        /// JSON with `points` or `squared_distances`.
        input: PathBuf,
        /// Where to write the certificate.
        output: PathBuf,
        /// Relative squared-distance tolerance the certificate must meet.
        #[arg(long, env = "TORUS_EMBED_TOL", default_value = DEFAULT_TOL)]
        tolerance: f64,
        /// Give every factor the same polygon order.
        #[arg(long)]
        uniform_m: bool,
        /// alpha^2 as a fraction of the smallest centered eigenvalue, in (0, 2).
        #[arg(long, default_value_t = 1.0)]
        alpha_fraction: f64,
        #[arg(long, short)]
        quiet: bool,
    },
    /// Check a certificate using chord lengths only.
    Verify {
        cert: PathBuf,
        #[arg(long, env = "TORUS_EMBED_TOL", default_value = DEFAULT_TOL)]
        tolerance: f64,
    },
    /// Write a test simplex as `{"points": ...}`.
    Gen {
        kind: GenKindArg,
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Coordinate noise for `perturbed`.
        #[arg(long, default_value_t = 0.01)]
        noise: f64,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Summarize a certificate.
    Inspect {
        cert: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKindArg {
    Regular,
    Random,
    Perturbed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Embed { input, output, tolerance, uniform_m, alpha_fraction, quiet } => {
            commands::embed(&input, &output, tolerance, uniform_m, alpha_fraction, quiet)
        }
        Command::Verify { cert, tolerance } => commands::verify(&cert, tolerance),
        Command::Gen { kind, n, seed, noise, output } => {
            let kind = match kind {
                GenKindArg::Regular => torus_embed::gen::GenKind::Regular,
                GenKindArg::Random => torus_embed::gen::GenKind::Random,
                GenKindArg::Perturbed => torus_embed::gen::GenKind::Perturbed { noise },
            };
            commands::gen(kind, n, seed, output.as_deref())
        }
        Command::Inspect { cert, json } => commands::inspect(&cert, json),
    };
    ExitCode::from(code)
}
