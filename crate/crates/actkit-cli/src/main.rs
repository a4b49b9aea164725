use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut out = std::io::stdout().lock();
    ExitCode::from(actkit_cli::run(&args, &mut out) as u8)
}
