mod args;
mod render;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use log::error;

use args::Cli;
use render::{render, witness_document, witness_path, write_atomic};
use run::Failure;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("QCSTAR_LOG")).format_timestamp(None).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            error!("{f}");
            eprintln!("qcstar: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, Failure> {
    let outcome = run::dispatch(cli)?;
    let witness = witness_path(cli.out.as_deref());
    let witness_name = witness.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let report = render(&outcome, cli.format, &witness_name);
    let io = |e: std::io::Error, path: &std::path::Path| Failure::Io(format!("{}: {e}", path.display()));
    if !outcome.passed {
        let doc = serde_json::to_string_pretty(&witness_document(&outcome)).expect("witnesses serialise") + "\n";
        write_atomic(&witness, &doc).map_err(|e| io(e, &witness))?;
    }
    match &cli.out {
        Some(path) => write_atomic(path, &report).map_err(|e| io(e, path))?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(report.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(Failure::Io(format!("stdout: {e}"))),
                _ => {}
            }
        }
    }
    Ok(if outcome.passed { 0 } else { 1 })
}
