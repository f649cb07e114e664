use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let result = hopfield_cli::parse_args(std::env::args().collect()).and_then(|cfg| hopfield_cli::run(&cfg));
    match result {
        Ok(outcome) => {
            for f in &outcome.files {
                log::info!("wrote {}", f.display());
            }
            if let Some(v) = &outcome.validation {
                for c in v.suites.iter().flat_map(|s| &s.checks).filter(|c| !c.passed) {
                    eprintln!("validation failed: {} ({} > {})", c.name, c.deviation, c.tolerance);
                }
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
