use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prabhakar_cli::config::{RunArgs, RunConfig};
use prabhakar_cli::run::run;

#[derive(Parser)]
#[command(
    version,
    about = "Sub-diffusion with the regularized Prabhakar derivative"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an example or custom problem, or run the verification suite
    #[command(allow_negative_numbers = true)]
    Run(RunArgs),
}

fn main() -> ExitCode {
    let Cli {
        command: Command::Run(args),
    } = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let outcome = RunConfig::from_args(args).and_then(|cfg| run(&cfg, &mut stdout));
    stdout.flush().ok();
    match outcome {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
