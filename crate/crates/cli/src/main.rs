use clap::Parser;
use daeforms_cli::{run, Cli, CliError};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => print!("{report}"),
        Err(e) => {
            // Failed checks are results and go to stdout; input errors do not.
            match &e {
                CliError::Check(msg) => println!("{msg}"),
                CliError::Input(_) => eprintln!("daeforms: {e}"),
            }
            std::process::exit(e.exit_code());
        }
    }
}
