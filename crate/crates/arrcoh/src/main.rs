use std::process::ExitCode;

use arrcoh::{run, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cfg, &mut out) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("arrcoh: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
