use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(catcausal_cli::run(std::env::args_os()))
}
