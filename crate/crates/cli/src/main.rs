use std::process::ExitCode;

fn main() -> ExitCode {
    gaussid_cli::main_impl()
}
