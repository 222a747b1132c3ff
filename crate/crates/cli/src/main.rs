use std::process::ExitCode;

fn main() -> ExitCode {
    darboux_forge::main_with_args(std::env::args_os())
}
