use std::process::ExitCode;

fn main() -> ExitCode {
    tonevis::cli::main()
}
