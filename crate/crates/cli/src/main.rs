use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use posfo_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(report) => {
            let out = if json {
                serde_json::to_string_pretty(&report.json).expect("JSON value")
            } else {
                report.text
            };
            // A closed pipe (`posfo ... | head`) is not an error worth reporting.
            if !out.is_empty() && writeln!(io::stdout().lock(), "{out}").is_err() {
                return ExitCode::from(2);
            }
            if report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
