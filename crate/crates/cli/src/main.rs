use std::process::ExitCode;

use clap::Parser;
use supsim_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command.run(cli.seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let dir = cli.out_dir();
    if let Err(e) = outcome.write(&dir, cli.format) {
        eprintln!("error: cannot write {}: {e}", dir.display());
        return ExitCode::from(2);
    }
    print!("{}", outcome.summary_json());
    if outcome.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
