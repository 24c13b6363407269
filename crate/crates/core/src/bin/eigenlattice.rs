fn main() {
    std::process::exit(eigenlattice::cli::run(std::env::args_os()));
}
