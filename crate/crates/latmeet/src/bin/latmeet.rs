use std::process::ExitCode;

fn main() -> ExitCode {
    latmeet::cli::run()
}
