use clap::Parser;
use plcover::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version arrive here too; those exit 0
            let code = if err.use_stderr() { cli::EXIT_USAGE } else { cli::EXIT_OK };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    std::process::exit(cli::run(&cli));
}
