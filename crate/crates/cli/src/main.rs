use std::process::ExitCode;

use agcode_cli::{run, Cli};
use anyhow::Context;
use clap::Parser;

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let outcome = run(&cli);
    for line in &outcome.messages {
        eprintln!("{line}");
    }
    match &outcome.file {
        Some((path, text)) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        }
        None => println!("{}", serde_json::to_string_pretty(&outcome.report)?),
    }
    Ok(ExitCode::from(outcome.status as u8))
}
