use std::process::ExitCode;

use clap::Parser;
use qw1d_cli::{run, tolerances_from_env, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = tolerances_from_env().and_then(|tol| run(&cli.command, &tol, &mut std::io::stdout().lock()));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
