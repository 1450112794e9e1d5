use std::process::ExitCode;

use clap::Parser;

use aspherix::cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(config) {
        Ok(out) => {
            println!("{}", out.stdout.trim_end());
            ExitCode::from(out.exit_code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
