use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use whitney_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match whitney_cli::execute(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(1)
        }
    }
}
