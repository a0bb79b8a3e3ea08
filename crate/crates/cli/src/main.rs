use clap::Parser;
use lamopt_cli::app::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Help and version requests are not errors.
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    std::process::exit(run(cli));
}
