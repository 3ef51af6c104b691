use std::path::PathBuf;
use std::process::ExitCode;

use bruckloop_cli::commands::{self, ConfigArgs, LoopKind};
use clap::{Parser, Subcommand};

/// Matrix Bruck loops on positive definite isometries and their affine
/// extensions.
#[derive(Debug, Parser)]
#[command(name = "bruckloop", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the verification suite and write a JSON report.
    Verify {
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Multiply two elements.
    Mul {
        lhs: PathBuf,
        rhs: PathBuf,
        #[arg(long = "loop", value_enum, default_value = "matrix")]
        kind: LoopKind,
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Factor an isometry of determinant one as S₁·C.
    Factor {
        path: PathBuf,
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Find a Φ element that moves the transversal.
    Witness {
        #[command(flatten)]
        args: ConfigArgs,
    },
    /// Print sampled elements, one JSON document per line.
    Sample {
        #[arg(long = "loop", value_enum, default_value = "matrix")]
        kind: LoopKind,
        #[command(flatten)]
        args: ConfigArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() {
                bruckloop_cli::EXIT_CONFIG
            } else {
                0
            };
            return ExitCode::from(code as u8);
        }
    };
    let result = match &cli.command {
        Command::Verify { args } => commands::verify(args),
        Command::Mul {
            lhs,
            rhs,
            kind,
            args,
        } => commands::mul(lhs, rhs, *kind, args),
        Command::Factor { path, args } => commands::factor(path, args),
        Command::Witness { args } => commands::witness(args),
        Command::Sample { kind, args } => commands::sample(args, *kind),
    };
    match result {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
