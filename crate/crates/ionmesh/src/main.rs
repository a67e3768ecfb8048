use clap::Parser;

fn main() {
    let cli = ionmesh::cli::Cli::parse();
    match ionmesh::cli::run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    }
}
