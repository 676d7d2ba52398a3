fn main() {
    std::process::exit(optimal_laplacian::cli::run(std::env::args_os()));
}
