use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use eulerlab::cli::EXIT_INPUT;
use eulerlab::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        println!("{}", serde_json::json!({ "error": e.kind(), "message": e.to_string() }));
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    let report = run(&cli);
    let text = serde_json::to_string_pretty(&report.json).expect("JSON values serialize");
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    eprintln!("{}", report.summary);
    ExitCode::from(report.code as u8)
}
