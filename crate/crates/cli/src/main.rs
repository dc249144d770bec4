use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use supertri_cli::{error_outcome, run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let mut outcome = run(&cli);
    let written = match (&cli.common.out, outcome.is_error) {
        (_, true) => std::io::stderr().write_all(outcome.output.as_bytes()),
        (Some(path), false) => std::fs::write(path, &outcome.output),
        (None, false) => std::io::stdout().write_all(outcome.output.as_bytes()),
    };
    if let Err(e) = written {
        outcome = error_outcome(&e.into());
        eprint!("{}", outcome.output);
    }
    ExitCode::from(outcome.code as u8)
}
