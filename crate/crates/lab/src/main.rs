use clap::Parser;

fn main() {
    let cli = bosonlab::cli::Cli::parse();
    if let Err(e) = bosonlab::cli::run(&cli) {
        eprintln!("bosonlab: {e}");
        std::process::exit(e.exit_code());
    }
}
