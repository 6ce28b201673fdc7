use clap::Parser;

use decoh_cli::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = cli.run_config().and_then(|cfg| decoh_cli::run(&cfg)) {
        eprintln!("decoh: {e}");
        std::process::exit(e.exit_code());
    }
}
