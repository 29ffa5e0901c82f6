use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = kilab::cli::Cli::parse();
    match kilab::cli::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
