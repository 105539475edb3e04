use std::process::ExitCode;

use clap::Parser;
use hnn_tower_cli::{render, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        let rep = run(&cfg)?;
        print!("{}", render(&rep, cfg.format)?);
        Ok(rep.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
