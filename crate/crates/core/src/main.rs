use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (outcome, stderr) = biquat::cli::run_args(std::env::args_os());
    if let Some(msg) = stderr {
        eprintln!("{}", msg.trim_end());
    }
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(outcome.stdout.as_bytes());
    let _ = out.flush();
    ExitCode::from(outcome.exit_code as u8)
}
