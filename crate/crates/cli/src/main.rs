fn main() {
    std::process::exit(fgraph_cli::run(std::env::args()));
}
