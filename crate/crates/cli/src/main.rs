use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(polmat_cli::run(std::env::args()) as u8)
}
