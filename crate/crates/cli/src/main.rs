use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_tol = std::env::var(unlockable_cli::TOL_ENV).ok();
    let code = unlockable_cli::run_cli(
        std::env::args_os(),
        env_tol.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code)
}
