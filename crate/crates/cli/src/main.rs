mod cli;
mod commands;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use weingarten::WeingartenCache;

use cli::{Cli, Format};

const INPUT_ERROR: u8 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(INPUT_ERROR),
            };
        }
    };
    match run(&cli) {
        Ok(status) => ExitCode::from(status),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let cache = match &cli.cache_dir {
        Some(dir) => WeingartenCache::with_dir(dir).map_err(|e| e.to_string())?,
        None => WeingartenCache::new(),
    };
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &cache).map_err(|e| e.to_string())?;
    let timing = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);

    let stdout = io::stdout().lock();
    match cli.format {
        Format::Json => {
            let mut out = stdout;
            let doc = outcome.report.to_json(timing);
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| e.to_string())?;
            writeln!(out).map_err(|e| e.to_string())?;
        }
        Format::Csv => {
            if let Some(ms) = timing {
                eprintln!("timing_ms: {ms:.3}");
            }
            outcome.report.write_csv(stdout).map_err(|e| e.to_string())?;
        }
    }
    Ok(outcome.status)
}
