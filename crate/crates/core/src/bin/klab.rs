fn main() {
    std::process::exit(klab::cli::run(std::env::args_os()));
}
