use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let inv = ddr5sc_cli::run(std::env::args_os(), ddr5sc_cli::output::color_enabled());
    let mut out = std::io::stdout().lock();
    if out.write_all(inv.stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(ddr5sc_cli::input::EXIT_IO);
    }
    eprint!("{}", inv.stderr);
    ExitCode::from(inv.code)
}
