use clap::Parser;

fn main() {
    let cli = pooltest::Cli::parse();
    std::process::exit(pooltest::execute(&cli));
}
