use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mucofix_cli::{run, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let out = run(&cli);
    let mut text = out.report;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    if out.code == EXIT_INPUT {
        eprint!("{text}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(out.code as u8)
}
