use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = auerbach_cli::run_from(std::env::args_os(), &mut io::stdin(), &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
