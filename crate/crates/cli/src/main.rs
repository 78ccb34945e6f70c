use clap::Parser;

fn main() {
    let cli = isolink_cli::Cli::parse();
    std::process::exit(isolink_cli::run(&cli));
}
