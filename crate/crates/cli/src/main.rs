use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use distinguish_cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DIST_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(report) => {
            // a closed pipe downstream is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{}", report.render(cli.global.plain));
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.global.plain {
                eprintln!("error: {e}");
            } else {
                let json = serde_json::to_string_pretty(&e.to_json()).expect("JSON values serialize");
                let _ = writeln!(std::io::stdout(), "{json}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
