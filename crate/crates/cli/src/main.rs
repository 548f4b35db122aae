mod commands;
mod human;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use commands::Failure;

#[derive(Parser)]
#[command(
    name = "u2split",
    version,
    about = "Invariants and index-2 unipotent factorizations of isometries"
)]
struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan numbers and Wall invariants of a problem.
    Invariants { file: PathBuf },
    /// Decide whether u is a product of two U2 elements.
    Decide {
        file: PathBuf,
        #[arg(long, value_enum)]
        mode: DecideMode,
    },
    /// Construct and verify a factorization.
    Factor {
        file: PathBuf,
        #[arg(long, value_enum, required_unless_present = "verify_only")]
        mode: Option<FactorMode>,
        #[arg(long, default_value_t = u2split_core::factor::DEFAULT_TRANSPORT_BUDGET)]
        transport_budget: u64,
        #[arg(long, env = "U2SPLIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Treat FILE as a factorization and only re-verify it.
        #[arg(long)]
        verify_only: bool,
    },
    /// Re-verify a factorization file.
    Verify { file: PathBuf },
    /// Brute-force product sets against the decision procedures.
    Oracle {
        /// gl<n>, sp<n>, o<n>, o:a,b,.. or ohyp<n>.
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        depth: Option<usize>,
        /// botha, symplectic2, symplectic3 or orthogonal2.
        #[arg(long)]
        theorem: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        max_group: usize,
        #[arg(long, default_value_t = 100_000_000)]
        max_params: u64,
    },
    /// Emit model isopairs as problem files.
    Model {
        #[command(subcommand)]
        kind: ModelKind,
        /// Emit the model together with its factorization.
        #[arg(long, global = true)]
        factors: bool,
    },
}

#[derive(Subcommand)]
pub enum ModelKind {
    /// Hyperbolic extension of the matrix in a GL problem file.
    HyperbolicExt {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: i64,
    },
    /// Boxed product of the forms `b` and `c` in FILE.
    Boxed {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: i64,
    },
    /// Two unipotent cells of sizes 2k+1 and 2k-1 on a hyperbolic space.
    Twisted {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "1")]
        scale: String,
        /// Field such as F3 or 5.
        #[arg(long)]
        field: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DecideMode {
    Gl,
    Sp,
    Orth,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FactorMode {
    Sp2,
    Sp3,
    Orth2,
    Gl,
}

/// What a command hands back: JSON, its human rendering and the exit code.
pub struct Report {
    pub json: Value,
    pub human: String,
    pub code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Invariants { file } => commands::invariants(&file),
        Command::Decide { file, mode } => commands::decide(&file, mode),
        Command::Factor {
            file,
            verify_only: true,
            ..
        }
        | Command::Verify { file } => commands::verify(&file),
        Command::Factor {
            file,
            mode,
            transport_budget,
            seed,
            ..
        } => commands::factor(
            &file,
            mode.expect("required by clap"),
            transport_budget,
            seed,
        ),
        Command::Oracle {
            group,
            p,
            depth,
            theorem,
            max_group,
            max_params,
        } => commands::oracle(&group, p, depth, theorem.as_deref(), max_group, max_params),
        Command::Model { kind, factors } => commands::model(&kind, factors),
    };
    match outcome {
        Ok(report) => {
            emit(cli.human, &report.json, &report.human);
            ExitCode::from(report.code)
        }
        Err(failure) => {
            let Failure {
                code,
                message,
                certificate,
            } = failure;
            if let Some(cert) = certificate {
                emit(cli.human, &cert, &human::certificate(&cert));
            }
            eprintln!("u2split: {message}");
            ExitCode::from(code)
        }
    }
}

/// Write errors (a closed pipe, say) are not worth a panic.
fn emit(human: bool, json: &Value, text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = if human {
        out.write_all(text.as_bytes())
    } else {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(json).expect("json values serialize")
        )
    };
}
