use clap::Parser;

fn main() {
    std::process::exit(dirac_delay::cli::run(dirac_delay::cli::Cli::parse()));
}
