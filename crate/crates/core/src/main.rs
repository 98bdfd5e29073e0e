use std::io::Write;

fn main() {
    let outcome = election_manipulation::cli::run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(outcome.status);
}
