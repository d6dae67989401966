use clap::Parser;
use std::process::ExitCode;

use tailbound::args::Cli;
use tailbound::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match tailbound::run(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
    }
}
