use std::io::Write;
use std::process::ExitCode;

use bandpos::cli::{run, Env};

fn main() -> ExitCode {
    let outcome = run(std::env::args_os(), Env::from_process());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
