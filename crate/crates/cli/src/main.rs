use std::process::ExitCode;

use ybmap_core::catalog::Registry;

fn main() -> ExitCode {
    let code = ybmap_cli::run(
        std::env::args_os(),
        &Registry::standard(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}
