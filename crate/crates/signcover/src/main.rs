use std::process::ExitCode;

fn main() -> ExitCode {
    let code = signcover::cli::run(std::env::args().collect());
    ExitCode::from(code.clamp(0, 255) as u8)
}
