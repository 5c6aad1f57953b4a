use clap::Parser;

fn main() {
    let cli = haan_cli::Cli::parse();
    let code = haan_cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
