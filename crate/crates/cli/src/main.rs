use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod homotopy;
mod pages;
mod verify;

use args::{Cli, Command};

/// Orders `2^k` of the torsion summands, comma separated; `-` when torsion-free.
pub(crate) fn torsion_orders(exponents: &[u32]) -> String {
    if exponents.is_empty() {
        return "-".to_string();
    }
    exponents.iter().map(|k| (1u64 << k).to_string()).collect::<Vec<_>>().join(",")
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("RO2SS_THREADS") else { return Ok(()) };
    let threads: usize = value.parse().map_err(|_| format!("RO2SS_THREADS must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool, String> {
    configure_threads()?;
    match cli.command {
        Command::Homotopy(a) => {
            emit(&homotopy::run(&a)?, a.output.as_deref())?;
            Ok(true)
        }
        Command::Pages(a) => {
            emit(&pages::run(&a)?, a.output.as_deref())?;
            Ok(true)
        }
        Command::Verify(a) => {
            let (v, notes) = verify::verify(&a).map_err(|e| e.to_string())?;
            emit(&verify::render(&v, &notes, a.format)?, a.output.as_deref())?;
            Ok(v.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
