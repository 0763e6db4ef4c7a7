fn main() {
    std::process::exit(harmap::cli::run(std::env::args().collect()));
}
