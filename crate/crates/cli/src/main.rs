use std::process::ExitCode;

use clap::Parser;
use robustcnot_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stderr()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("robustcnot: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
