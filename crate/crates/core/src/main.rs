use std::process::ExitCode;

use clap::Parser;
use wgfm::cli::{run, Cli};

fn main() -> ExitCode {
    if let Some(n) = std::env::var("WGFM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.summary);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
