use clap::Parser;

fn main() {
    env_logger::init();
    let cli = photonparity_cli::Cli::parse();
    std::process::exit(photonparity_cli::run(&cli));
}
