use std::process::ExitCode;

fn main() -> ExitCode {
    match qldpc::cli::run_from(std::env::args_os()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(qldpc::Error::Usage(message)) => {
            eprint!("{message}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
