use std::process::ExitCode;

use clap::Parser;
use deltascale_cli::{exit_code, run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("DELTASCALE_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            println!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
