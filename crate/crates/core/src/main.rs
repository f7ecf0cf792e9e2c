use std::process::ExitCode;

use clap::Parser;
use trust_ramsey::cli::{run_with_std_streams, Cli};

fn main() -> ExitCode {
    // clap would exit 2 on usage errors, which is the solve-error code here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(threads) = cli.threads {
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
        #[cfg(not(feature = "parallel"))]
        let _ = threads;
    }
    ExitCode::from(run_with_std_streams(&cli).code())
}
