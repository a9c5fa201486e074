use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use harmsum_cli::{run, Query};

fn main() -> ExitCode {
    let query = Query::parse();
    if let Some(threads) = query.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot start {threads} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let out = run(&query);
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
