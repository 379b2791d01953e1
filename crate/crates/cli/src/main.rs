use clap::Parser;
use secview_cli::{run, Cli, EXIT_ERROR, EXIT_OK};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit status 2 means "insecure", so usage errors report 1 instead.
            std::process::exit(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    let code = run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
