fn main() {
    std::process::exit(quickar::cli::run(std::env::args_os()));
}
