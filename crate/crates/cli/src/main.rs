use std::process::ExitCode;

use peridisp_cli::{dispatch, parse_config, CliError};

fn main() -> ExitCode {
    match parse_config(std::env::args_os()) {
        Ok(cfg) => ExitCode::from(dispatch(&cfg)),
        Err(CliError::Clap(e)) => e.exit(),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
