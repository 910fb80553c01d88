use clap::Parser;
use relaylink::cli::{execute, Cli};

fn main() {
    std::process::exit(execute(Cli::parse()));
}
