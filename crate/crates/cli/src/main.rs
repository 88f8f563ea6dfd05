use clap::Parser;

fn main() {
    let cli = anisoperim_cli::Cli::parse();
    if let Err(e) = anisoperim_cli::run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
