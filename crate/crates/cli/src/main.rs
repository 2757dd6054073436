use std::process::ExitCode;

use ttc_cli::{parse_args, resolve, run_experiment, CliError, CliResult, ParseOutcome};

fn execute() -> CliResult<()> {
    let cli = match parse_args(std::env::args_os()) {
        Ok(cli) => cli,
        Err(ParseOutcome::Clap(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            std::process::exit(code);
        }
        Err(ParseOutcome::Cli(e)) => return Err(e),
    };
    let runs = resolve(&cli)?;
    if let Some(threads) = runs.first().and_then(|r| r.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    }
    for cfg in &runs {
        let outcome = run_experiment(cfg)?;
        for file in &outcome.files {
            println!("{}", file.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ttc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
