use clap::Parser;
use intermodal_service::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
