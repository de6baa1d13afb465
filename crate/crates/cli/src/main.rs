use std::process::ExitCode;

fn main() -> ExitCode {
    let code = affina_cli::run(std::env::args_os());
    ExitCode::from(code)
}
