fn main() {
    std::process::exit(robustlab::cli::run(std::env::args_os()));
}
