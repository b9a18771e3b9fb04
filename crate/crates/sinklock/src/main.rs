use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    // Die quietly when stdout closes early (`sinklock table ... | head`)
    // instead of panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = sinklock::cli::Cli::parse();
    match sinklock::cli::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
