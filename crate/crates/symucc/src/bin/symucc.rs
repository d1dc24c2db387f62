fn main() {
    std::process::exit(symucc::cli::run(std::env::args_os()));
}
