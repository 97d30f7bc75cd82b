use std::process::ExitCode;

fn main() -> ExitCode {
    let code = skl::cli::main_with_args(std::env::args().collect());
    ExitCode::from(code as u8)
}
