use std::process::ExitCode;

use clap::Parser;
use hilbert_cli::app::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(e) = cli.eps {
        // Read once by the core on first use, so it must be set first.
        std::env::set_var("HILBERT_EPS", e.to_string());
    }
    let mut out = std::io::stdout().lock();
    match run(&cli, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hilbert: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
