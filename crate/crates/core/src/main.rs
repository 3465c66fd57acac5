use std::process::ExitCode;

use clap::Parser;
use sixterm::cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli).and_then(|cfg| run(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
