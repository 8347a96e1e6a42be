use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(tritile::cli::run(std::env::args_os()))
}
